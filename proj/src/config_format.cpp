#include "biofilm/config_format.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace biofilm {

namespace {

struct Value {
  bool is_string = false;
  std::string text;
  std::vector<double> numbers;
  int line = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s, bool allow_dots) {
  if (s.empty()) return false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || ch == '_' || (allow_dots && ch == '.'))) return false;
  }
  return s.front() != '.' && s.back() != '.';
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

Value parse_value(std::string_view raw, int line) {
  Value v;
  v.line = line;
  if (raw.empty()) throw ConfigError(ConfigErrorCode::Syntax, "missing value", line);
  if (raw.front() == '"') {
    const auto close = raw.find('"', 1);
    if (close == std::string_view::npos || !trim(raw.substr(close + 1)).empty()) {
      throw ConfigError(ConfigErrorCode::Syntax, "unterminated or malformed string", line);
    }
    v.is_string = true;
    v.text = std::string(raw.substr(1, close - 1));
    return v;
  }
  if (std::isalpha(static_cast<unsigned char>(raw.front()))) {
    // Bare words such as `kind = constant` read as strings.
    constexpr std::string_view word_chars =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-";
    if (raw.find_first_not_of(word_chars) == std::string_view::npos) {
      v.is_string = true;
      v.text = std::string(raw);
      return v;
    }
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = raw.find(',', start);
    const auto item = raw.substr(start, comma == std::string_view::npos ? raw.npos : comma - start);
    double x = 0.0;
    if (!parse_double(item, x)) {
      throw ConfigError(ConfigErrorCode::Syntax, "expected a number, got '" + std::string(trim(item)) + "'",
                        line);
    }
    v.numbers.push_back(x);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return v;
}

class Document {
 public:
  explicit Document(std::string_view text) {
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto eol = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;
      line = trim(strip_comment(line));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          throw ConfigError(ConfigErrorCode::Syntax, "section header missing ']'", line_no);
        }
        const auto name = trim(line.substr(1, line.size() - 2));
        if (!valid_name(name, true)) {
          throw ConfigError(ConfigErrorCode::Syntax, "invalid section name", line_no);
        }
        section = std::string(name);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError(ConfigErrorCode::Syntax, "expected 'key = value'", line_no);
      }
      const auto key = trim(line.substr(0, eq));
      if (!valid_name(key, true)) throw ConfigError(ConfigErrorCode::Syntax, "invalid key", line_no);
      if (section.empty()) {
        throw ConfigError(ConfigErrorCode::Syntax, "key outside of any section", line_no);
      }
      std::string full = section + "." + std::string(key);
      if (entries_.count(full)) {
        throw ConfigError(ConfigErrorCode::Syntax, "duplicate key '" + full + "'", line_no);
      }
      entries_.emplace(std::move(full), parse_value(trim(line.substr(eq + 1)), line_no));
    }
  }

  const Value* find(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  double number(const std::string& key) {
    const Value* v = find(key);
    if (!v) throw ConfigError(ConfigErrorCode::MissingKey, "missing required key '" + key + "'");
    return scalar(key, *v);
  }

  double number_or(const std::string& key, double fallback) {
    const Value* v = find(key);
    return v ? scalar(key, *v) : fallback;
  }

  long integer_or(const std::string& key, long fallback) {
    const Value* v = find(key);
    if (!v) return fallback;
    const double x = scalar(key, *v);
    if (x != std::floor(x) || std::abs(x) > 1e15) {
      throw ConfigError(ConfigErrorCode::InvalidValue, "'" + key + "' must be an integer", v->line);
    }
    return static_cast<long>(x);
  }

  std::vector<double> list(const std::string& key) {
    const Value* v = find(key);
    if (!v) throw ConfigError(ConfigErrorCode::MissingKey, "missing required key '" + key + "'");
    if (v->is_string) {
      throw ConfigError(ConfigErrorCode::InvalidValue, "'" + key + "' must be numeric", v->line);
    }
    return v->numbers;
  }

  std::string text_or(const std::string& key, const std::string& fallback) {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_string) {
      throw ConfigError(ConfigErrorCode::InvalidValue, "'" + key + "' must be a quoted string",
                        v->line);
    }
    return v->text;
  }

  int line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  void reject_unused() const {
    for (const auto& [key, value] : entries_) {
      if (!used_.count(key)) {
        throw ConfigError(ConfigErrorCode::UnknownKey, "unknown key '" + key + "'", value.line);
      }
    }
  }

 private:
  static double scalar(const std::string& key, const Value& v) {
    if (v.is_string || v.numbers.size() != 1) {
      throw ConfigError(ConfigErrorCode::InvalidValue, "'" + key + "' must be a single number",
                        v.line);
    }
    return v.numbers.front();
  }

  std::map<std::string, Value> entries_;
  std::set<std::string> used_;
};

TimeBasis parse_basis(Document& doc, const std::string& key, TimeBasis fallback) {
  const std::string text = doc.text_or(key, "");
  if (text.empty()) return fallback;
  if (text == "time") return TimeBasis::Time;
  if (text == "step") return TimeBasis::StepIndex;
  throw ConfigError(ConfigErrorCode::InvalidValue, "'" + key + "' must be \"time\" or \"step\"",
                    doc.line_of(key));
}

ForcingSignal parse_forcing(Document& doc, const std::string& section) {
  const std::string kind_key = section + ".kind";
  const std::string kind = doc.text_or(kind_key, "");
  if (kind.empty()) {
    throw ConfigError(ConfigErrorCode::MissingKey, "missing required key '" + kind_key + "'");
  }
  if (kind == "constant") return ForcingSignal::constant(doc.number(section + ".value"));
  if (kind == "sinusoid") {
    return ForcingSignal::Sinusoid{doc.number(section + ".offset"),
                                   doc.number(section + ".amplitude"),
                                   doc.number(section + ".angular_frequency"),
                                   parse_basis(doc, section + ".basis", TimeBasis::Time)};
  }
  if (kind == "step") {
    const bool by_time = doc.find(section + ".switch_time") != nullptr;
    ForcingSignal::Step step;
    step.basis = by_time ? TimeBasis::Time : TimeBasis::StepIndex;
    step.switch_at = doc.number(section + (by_time ? ".switch_time" : ".switch_step"));
    step.before = doc.number(section + ".before");
    step.after = doc.number(section + ".after");
    return step;
  }
  throw ConfigError(ConfigErrorCode::InvalidValue,
                    "'" + kind_key + "' must be constant, sinusoid or step", doc.line_of(kind_key));
}

void write_forcing(std::ostream& os, const std::string& which, const ForcingSignal& f) {
  os << "\n[forcing." << which << "]\n";
  os << "kind = \"" << f.kind() << "\"\n";
  if (const auto* c = std::get_if<ForcingSignal::Constant>(&f.shape())) {
    os << "value = " << format_number(c->value) << "\n";
  } else if (const auto* s = std::get_if<ForcingSignal::Sinusoid>(&f.shape())) {
    os << "offset = " << format_number(s->offset) << "\n";
    os << "amplitude = " << format_number(s->amplitude) << "\n";
    os << "angular_frequency = " << format_number(s->angular_frequency) << "\n";
    os << "basis = \"" << (s->basis == TimeBasis::Time ? "time" : "step") << "\"\n";
  } else if (const auto* st = std::get_if<ForcingSignal::Step>(&f.shape())) {
    os << (st->basis == TimeBasis::Time ? "switch_time = " : "switch_step = ")
       << format_number(st->switch_at) << "\n";
    os << "before = " << format_number(st->before) << "\n";
    os << "after = " << format_number(st->after) << "\n";
  }
}

std::string quoted(const std::string& s) {
  if (s.find('"') != std::string::npos || s.find('\n') != std::string::npos) {
    throw ConfigError(ConfigErrorCode::InvalidValue, "strings may not contain quotes or newlines");
  }
  return "\"" + s + "\"";
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ScenarioConfig parse_config(std::string_view text) {
  Document doc(text);

  const long n = doc.integer_or("model.n", 0);
  if (n < 1) {
    if (!doc.find("model.n")) {
      throw ConfigError(ConfigErrorCode::MissingKey, "missing required key 'model.n'");
    }
    throw ConfigError(ConfigErrorCode::InvalidValue, "'model.n' must be positive",
                      doc.line_of("model.n"));
  }

  Matrix A(n, n);
  for (long i = 0; i < n; ++i) {
    const std::string row = "row" + std::to_string(i + 1);
    const std::string key = doc.find("model.A." + row) ? "model.A." + row : "model." + row;
    const auto values = doc.list(key);
    if (static_cast<long>(values.size()) != n) {
      throw ConfigError(ConfigErrorCode::DimensionMismatch,
                        "'" + key + "' must have " + std::to_string(n) + " entries",
                        doc.line_of(key));
    }
    for (long j = 0; j < n; ++j) A(i, j) = values[static_cast<std::size_t>(j)];
  }
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      if (A(i, j) != A(j, i)) {
        throw ConfigError(ConfigErrorCode::AsymmetricGrowth,
                          "growth matrix is not symmetric: A[" + std::to_string(i + 1) + "][" +
                              std::to_string(j + 1) + "] != A[" + std::to_string(j + 1) + "][" +
                              std::to_string(i + 1) + "]");
      }
    }
  }

  Vector b(n), eta(n), phi(n), psi(n);
  for (long i = 0; i < n; ++i) {
    const std::string s = "species." + std::to_string(i + 1);
    b(i) = doc.number(s + ".b");
    eta(i) = doc.number(s + ".eta");
    phi(i) = doc.number(s + ".phi0_initial");
    psi(i) = doc.number_or(s + ".psi_initial", 1.0);
    if (!(eta(i) > 0.0)) {
      throw ConfigError(ConfigErrorCode::NonPositiveViscosity, "'" + s + ".eta' must be positive",
                        doc.line_of(s + ".eta"));
    }
  }
  const double eta0 = doc.number_or("model.eta0", 1.0);
  if (!(eta0 > 0.0)) {
    throw ConfigError(ConfigErrorCode::NonPositiveViscosity, "'model.eta0' must be positive",
                      doc.line_of("model.eta0"));
  }
  const double barrier_scale = doc.number_or("model.barrier_scale", 1e-4);
  if (!(barrier_scale > 0.0)) {
    throw ConfigError(ConfigErrorCode::InvalidValue, "'model.barrier_scale' must be positive",
                      doc.line_of("model.barrier_scale"));
  }
  const long psi_multiplier = doc.integer_or("model.psi_multiplier", 0);
  if (psi_multiplier != 0 && psi_multiplier != 1) {
    throw ConfigError(ConfigErrorCode::InvalidValue, "'model.psi_multiplier' must be 0 or 1",
                      doc.line_of("model.psi_multiplier"));
  }

  ScenarioConfig config{doc.text_or("model.name", "custom"),
                        doc.text_or("model.description", ""),
                        ModelParams(A, b, eta, eta0, barrier_scale, psi_multiplier == 1),
                        phi,
                        psi,
                        parse_forcing(doc, "forcing.nutrient"),
                        parse_forcing(doc, "forcing.antibiotic"),
                        {},
                        {}};

  SolverSettings& s = config.solver;
  s.dt = doc.number_or("solver.dt", s.dt);
  s.steps = doc.integer_or("solver.steps", s.steps);
  s.residual_tolerance = doc.number_or("solver.residual_tolerance", s.residual_tolerance);
  s.max_newton_iterations =
      static_cast<int>(doc.integer_or("solver.max_newton_iterations", s.max_newton_iterations));
  s.max_halvings = static_cast<int>(doc.integer_or("solver.max_halvings", s.max_halvings));
  s.steady_state_tolerance =
      doc.number_or("solver.steady_state_tolerance", s.steady_state_tolerance);
  s.max_substep_depth =
      static_cast<int>(doc.integer_or("solver.max_substep_depth", s.max_substep_depth));

  config.output.csv_path = doc.text_or("output.csv", "");
  config.output.stride = doc.integer_or("output.stride", 1);

  doc.reject_unused();
  config.validate();
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorCode::InvalidValue, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ScenarioConfig& config) {
  const ModelParams& p = config.params;
  const int n = p.species_count();
  std::ostringstream os;
  os << "[model]\n";
  os << "name = " << quoted(config.name) << "\n";
  if (!config.description.empty()) os << "description = " << quoted(config.description) << "\n";
  os << "n = " << n << "\n";
  os << "eta0 = " << format_number(p.empty_viscosity()) << "\n";
  os << "barrier_scale = " << format_number(p.barrier_scale()) << "\n";
  os << "psi_multiplier = " << (p.psi_multiplier() ? 1 : 0) << "\n";
  os << "\n[model.A]\n";
  for (int i = 0; i < n; ++i) {
    os << "row" << i + 1 << " = ";
    for (int j = 0; j < n; ++j) os << (j ? ", " : "") << format_number(p.growth()(i, j));
    os << "\n";
  }
  for (int i = 0; i < n; ++i) {
    os << "\n[species." << i + 1 << "]\n";
    os << "b = " << format_number(p.sensitivity()(i)) << "\n";
    os << "eta = " << format_number(p.viscosity()(i)) << "\n";
    os << "phi0_initial = " << format_number(config.initial_phi(i)) << "\n";
    os << "psi_initial = " << format_number(config.initial_psi(i)) << "\n";
  }
  write_forcing(os, "nutrient", config.nutrient);
  write_forcing(os, "antibiotic", config.antibiotic);

  const SolverSettings& s = config.solver;
  os << "\n[solver]\n";
  os << "dt = " << format_number(s.dt) << "\n";
  os << "steps = " << s.steps << "\n";
  os << "residual_tolerance = " << format_number(s.residual_tolerance) << "\n";
  os << "max_newton_iterations = " << s.max_newton_iterations << "\n";
  os << "max_halvings = " << s.max_halvings << "\n";
  os << "steady_state_tolerance = " << format_number(s.steady_state_tolerance) << "\n";
  os << "max_substep_depth = " << s.max_substep_depth << "\n";

  os << "\n[output]\n";
  if (!config.output.csv_path.empty()) os << "csv = " << quoted(config.output.csv_path) << "\n";
  os << "stride = " << config.output.stride << "\n";
  return os.str();
}

}  // namespace biofilm
