#include "trophy_cli/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "trophy/csv.hpp"
#include "trophy/error.hpp"

namespace trophy::cli {

ManifestError::ManifestError(const std::string& source, int line, const std::string& field,
                             const std::string& reason)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + field + ": " + reason),
      line_(line),
      field_(field) {}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      items.push_back(item);
    }
  }
  return items;
}

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string kind;
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
};

class Parser {
 public:
  Parser(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  RunManifest run() {
    read_sections();
    RunManifest m;
    bool have_suite = false;
    std::set<std::string> solver_names;
    for (const Section& sec : sections_) {
      if (sec.kind == "suite") {
        have_suite = true;
        read_suite(sec, m);
      } else if (sec.kind == "output") {
        read_output(sec, m);
      } else {
        if (!solver_names.insert(sec.name).second) {
          fail(sec.line, "solver", "duplicate solver name '" + sec.name + "'");
        }
        m.solvers.push_back(read_solver(sec));
      }
    }
    if (!have_suite) {
      fail(last_line_, "suite", "missing [suite] section");
    }
    if (m.solvers.empty()) {
      fail(last_line_, "solver", "no [solver NAME] sections");
    }
    return m;
  }

 private:
  [[noreturn]] void fail(int line, const std::string& field, const std::string& reason) const {
    throw ManifestError(source_, line, field, reason);
  }

  void read_sections() {
    std::stringstream in(text_);
    std::string raw;
    int line = 0;
    Section* current = nullptr;
    std::set<std::string> singletons;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (body.empty()) {
        continue;
      }
      if (body.front() == '[') {
        if (body.back() != ']') {
          fail(line, "section", "unterminated section header");
        }
        const std::string header = trim(body.substr(1, body.size() - 2));
        Section sec;
        sec.line = line;
        if (header == "suite" || header == "output") {
          if (!singletons.insert(header).second) {
            fail(line, header, "section appears twice");
          }
          sec.kind = header;
        } else if (header.rfind("solver", 0) == 0 && header.size() > 6 && (header[6] == ' ' || header[6] == '\t')) {
          sec.kind = "solver";
          sec.name = trim(header.substr(6));
          if (sec.name.find_first_of(" \t,\"") != std::string::npos) {
            fail(line, "solver", "solver name '" + sec.name + "' contains whitespace, a comma or a quote");
          }
        } else {
          fail(line, "section", "unknown section [" + header + "]");
        }
        sections_.push_back(std::move(sec));
        current = &sections_.back();
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        fail(line, body, "expected key = value");
      }
      const std::string key = trim(body.substr(0, eq));
      if (current == nullptr) {
        fail(line, key, "key outside of any section");
      }
      if (key.empty()) {
        fail(line, "key", "empty key");
      }
      if (!current->entries.emplace(key, Entry{trim(body.substr(eq + 1)), line}).second) {
        fail(line, key, "duplicate key");
      }
    }
    last_line_ = std::max(line, 1);
  }

  double number(const std::string& key, const Entry& e) const {
    double v = 0.0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      fail(e.line, key, "'" + e.value + "' is not a number");
    }
    return v;
  }

  int integer(const std::string& key, const Entry& e) const {
    int v = 0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      fail(e.line, key, "'" + e.value + "' is not an integer");
    }
    return v;
  }

  bool boolean(const std::string& key, const Entry& e) const {
    if (e.value == "true") {
      return true;
    }
    if (e.value == "false") {
      return false;
    }
    fail(e.line, key, "expected true or false");
  }

  void read_suite(const Section& sec, RunManifest& m) const {
    for (const auto& [key, e] : sec.entries) {
      if (key == "problems") {
        m.problems = split_list(e.value);
        for (const std::string& name : m.problems) {
          try {
            (void)find_problem(name);
          } catch (const UsageError&) {
            fail(e.line, key, "unknown problem '" + name + "'");
          }
        }
      } else if (key == "max_dim") {
        m.max_dim = integer(key, e);
      } else {
        fail(e.line, key, "unknown key in [suite]");
      }
    }
    if (sec.entries.count("problems") != 0 && m.max_dim) {
      fail(sec.entries.at("max_dim").line, "max_dim", "give either problems or max_dim, not both");
    }
    if (sec.entries.count("problems") == 0 && !m.max_dim) {
      fail(sec.line, "suite", "needs problems or max_dim");
    }
    if (m.resolve_suite().empty()) {
      const auto& e = m.max_dim ? sec.entries.at("max_dim") : sec.entries.at("problems");
      fail(e.line, m.max_dim ? "max_dim" : "problems", "suite selection is empty");
    }
  }

  void read_output(const Section& sec, RunManifest& m) const {
    for (const auto& [key, e] : sec.entries) {
      if (key == "dir") {
        if (e.value.empty()) {
          fail(e.line, key, "empty directory");
        }
        m.out_dir = e.value;
      } else if (key == "jobs") {
        m.jobs = integer(key, e);
        if (m.jobs < 1) {
          fail(e.line, key, "must be at least 1");
        }
      } else if (key == "cost_model") {
        try {
          (void)CostModel::by_name(e.value);
        } catch (const UsageError&) {
          fail(e.line, key, "unknown cost model '" + e.value + "'");
        }
        m.cost_model = e.value;
      } else {
        fail(e.line, key, "unknown key in [output]");
      }
    }
  }

  SolverDefinition read_solver(const Section& sec) const {
    SolverDefinition def;
    if (auto it = sec.entries.find("preset"); it != sec.entries.end()) {
      try {
        def = solver_preset(it->second.value);
      } catch (const UsageError&) {
        fail(it->second.line, "preset", "unknown preset '" + it->second.value + "'");
      }
    }
    def.name = sec.name;
    SolverConfig& c = def.config;

    using Setter = std::function<void(const std::string&, const Entry&)>;
    const std::map<std::string, Setter> setters{
        {"preset", [](const std::string&, const Entry&) {}},
        {"algorithm",
         [&](const std::string& k, const Entry& e) {
           if (e.value == "trophy") {
             def.algorithm = SolverAlgorithm::trophy;
           } else if (e.value == "trust_region") {
             def.algorithm = SolverAlgorithm::trust_region;
           } else {
             fail(e.line, k, "expected trophy or trust_region");
           }
         }},
        {"bits",
         [&](const std::string& k, const Entry& e) {
           std::vector<int> bits;
           for (const std::string& item : split_list(e.value)) {
             bits.push_back(integer(k, Entry{item, e.line}));
           }
           try {
             c.hierarchy = PrecisionHierarchy(bits);
           } catch (const ConfigError& err) {
             fail(e.line, k, err.what());
           }
         }},
        {"eta1", [&](const std::string& k, const Entry& e) { c.eta1 = number(k, e); }},
        {"eta2", [&](const std::string& k, const Entry& e) { c.eta2 = number(k, e); }},
        {"gamma_inc", [&](const std::string& k, const Entry& e) { c.gamma_inc = number(k, e); }},
        {"gamma_dec", [&](const std::string& k, const Entry& e) { c.gamma_dec = number(k, e); }},
        {"omega", [&](const std::string& k, const Entry& e) { c.omega = number(k, e); }},
        {"delta0", [&](const std::string& k, const Entry& e) { c.delta0 = number(k, e); }},
        {"eps_tol", [&](const std::string& k, const Entry& e) { c.eps_tol = number(k, e); }},
        {"max_iter", [&](const std::string& k, const Entry& e) { c.max_iter = integer(k, e); }},
        {"memory", [&](const std::string& k, const Entry& e) { c.lsr1_memory = integer(k, e); }},
        {"reset_pairs_on_switch",
         [&](const std::string& k, const Entry& e) { c.reset_pairs_on_switch = boolean(k, e); }},
        {"forcing",
         [&](const std::string& k, const Entry& e) {
           if (e.value == "geometric") {
             c.forcing.kind = ForcingSequence::Kind::geometric;
           } else if (e.value == "harmonic") {
             c.forcing.kind = ForcingSequence::Kind::harmonic;
           } else {
             fail(e.line, k, "expected geometric or harmonic");
           }
         }},
        {"forcing_scale", [&](const std::string& k, const Entry& e) { c.forcing.scale = number(k, e); }},
        {"forcing_ratio", [&](const std::string& k, const Entry& e) { c.forcing.ratio = number(k, e); }},
    };
    const SolverDefinition base = def;
    auto apply_all_but = [&](const std::string* skip) {
      def = base;
      for (const auto& [key, e] : sec.entries) {
        auto it = setters.find(key);
        if (it == setters.end()) {
          fail(e.line, key, "unknown key in [solver " + sec.name + "]");
        }
        if (skip == nullptr || key != *skip) {
          it->second(key, e);
        }
      }
    };
    auto valid = [&]() -> std::optional<std::string> {
      SolverConfig probe = c;
      probe.x0 = Eigen::VectorXd::Zero(1);
      try {
        probe.validate();
      } catch (const ConfigError& err) {
        return err.what();
      }
      return std::nullopt;
    };
    apply_all_but(nullptr);
    if (const auto reason = valid()) {
      // Blame the earliest key whose removal makes the section valid.
      std::vector<std::pair<int, std::string>> by_line;
      for (const auto& [key, e] : sec.entries) {
        by_line.emplace_back(e.line, key);
      }
      std::sort(by_line.begin(), by_line.end());
      for (const auto& [line, key] : by_line) {
        apply_all_but(&key);
        if (!valid()) {
          fail(line, key, *reason);
        }
      }
      fail(sec.line, "solver " + sec.name, *reason);
    }
    return def;
  }

  const std::string& text_;
  std::string source_;
  std::vector<Section> sections_;
  int last_line_ = 1;
};

bool same_config(const SolverConfig& a, const SolverConfig& b) {
  return a.eta1 == b.eta1 && a.eta2 == b.eta2 && a.gamma_inc == b.gamma_inc && a.gamma_dec == b.gamma_dec &&
         a.omega == b.omega && a.forcing.kind == b.forcing.kind && a.forcing.scale == b.forcing.scale &&
         a.forcing.ratio == b.forcing.ratio && a.delta0 == b.delta0 && a.eps_tol == b.eps_tol &&
         a.max_iter == b.max_iter && a.lsr1_memory == b.lsr1_memory &&
         a.reset_pairs_on_switch == b.reset_pairs_on_switch && a.hierarchy == b.hierarchy;
}

}  // namespace

std::vector<ProblemSpec> RunManifest::resolve_suite() const {
  if (max_dim) {
    return list_problems(*max_dim);
  }
  std::vector<ProblemSpec> out;
  for (const std::string& name : problems) {
    out.push_back(find_problem(name));
  }
  std::sort(out.begin(), out.end(), [](const ProblemSpec& a, const ProblemSpec& b) { return a.name < b.name; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const ProblemSpec& a, const ProblemSpec& b) { return a.name == b.name; }),
            out.end());
  return out;
}

RunManifest parse_manifest(const std::string& text, const std::string& source) {
  return Parser(text, source).run();
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ManifestError(path, 0, "file", "cannot open");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path);
}

std::string serialize_manifest(const RunManifest& m) {
  using csv::format_double;
  std::ostringstream out;
  out << "[suite]\n";
  if (m.max_dim) {
    out << "max_dim = " << *m.max_dim << '\n';
  } else {
    out << "problems = ";
    for (std::size_t i = 0; i < m.problems.size(); ++i) {
      out << (i ? ", " : "") << m.problems[i];
    }
    out << '\n';
  }
  out << "\n[output]\ndir = " << m.out_dir << "\njobs = " << m.jobs << "\ncost_model = " << m.cost_model << '\n';
  for (const SolverDefinition& s : m.solvers) {
    const SolverConfig& c = s.config;
    out << "\n[solver " << s.name << "]\n";
    out << "algorithm = " << (s.algorithm == SolverAlgorithm::trophy ? "trophy" : "trust_region") << '\n';
    out << "bits = ";
    const std::vector<int> bits = c.hierarchy.all_bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
      out << (i ? ", " : "") << bits[i];
    }
    out << '\n';
    out << "eta1 = " << format_double(c.eta1) << '\n';
    out << "eta2 = " << format_double(c.eta2) << '\n';
    out << "gamma_inc = " << format_double(c.gamma_inc) << '\n';
    out << "gamma_dec = " << format_double(c.gamma_dec) << '\n';
    out << "omega = " << format_double(c.omega) << '\n';
    out << "delta0 = " << format_double(c.delta0) << '\n';
    out << "eps_tol = " << format_double(c.eps_tol) << '\n';
    out << "max_iter = " << c.max_iter << '\n';
    out << "memory = " << c.lsr1_memory << '\n';
    out << "reset_pairs_on_switch = " << (c.reset_pairs_on_switch ? "true" : "false") << '\n';
    out << "forcing = " << (c.forcing.kind == ForcingSequence::Kind::geometric ? "geometric" : "harmonic") << '\n';
    out << "forcing_scale = " << format_double(c.forcing.scale) << '\n';
    out << "forcing_ratio = " << format_double(c.forcing.ratio) << '\n';
  }
  return out.str();
}

bool equivalent(const RunManifest& a, const RunManifest& b) {
  if (a.problems != b.problems || a.max_dim != b.max_dim || a.out_dir != b.out_dir || a.jobs != b.jobs ||
      a.cost_model != b.cost_model || a.solvers.size() != b.solvers.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.solvers.size(); ++i) {
    const SolverDefinition& x = a.solvers[i];
    const SolverDefinition& y = b.solvers[i];
    if (x.name != y.name || x.algorithm != y.algorithm || !same_config(x.config, y.config)) {
      return false;
    }
  }
  return true;
}

}  // namespace trophy::cli
