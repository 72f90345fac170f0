#include "codecsel/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace codecsel {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw InputError(where + ": expected a number, got '" + t + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw InputError(where + ": expected a nonnegative integer, got '" + t + "'");
  }
  return v;
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CriterionMatrix load_matrix(const std::string& path) {
  auto in = open_file(path);
  return parse_matrix(in, path);
}

CriterionMatrix parse_matrix(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "sample_id,codec_id,criterion_id,value") {
    throw InputError(source_name + ": expected header 'sample_id,codec_id,criterion_id,value'");
  }
  std::vector<std::string> samples, codecs, criteria;
  std::map<std::string, std::size_t> sample_idx, codec_idx, criterion_idx;
  const auto intern = [](const std::string& id, std::vector<std::string>& ids,
                         std::map<std::string, std::size_t>& index) {
    auto it = index.find(id);
    if (it != index.end()) return it->second;
    index[id] = ids.size();
    ids.push_back(id);
    return ids.size() - 1;
  };

  struct Entry {
    std::size_t sample, codec, criterion;
    double value;
  };
  std::vector<Entry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (fields.size() != 4) {
      throw InputError(where + ": expected 4 comma-separated fields, got " +
                       std::to_string(fields.size()));
    }
    Entry e;
    e.sample = intern(trim(fields[0]), samples, sample_idx);
    e.codec = intern(trim(fields[1]), codecs, codec_idx);
    e.criterion = intern(trim(fields[2]), criteria, criterion_idx);
    e.value = parse_double(fields[3], where);
    if (!std::isfinite(e.value)) throw InputError(where + ": value must be finite");
    entries.push_back(e);
  }
  if (entries.empty()) throw InputError(source_name + ": no data rows");

  const std::size_t m = samples.size();
  std::vector<double> values(codecs.size() * criteria.size() * m);
  std::vector<bool> seen(values.size(), false);
  for (const auto& e : entries) {
    const std::size_t idx = (e.codec * criteria.size() + e.criterion) * m + e.sample;
    if (seen[idx]) {
      throw InputError(source_name + ": duplicate triple (" + samples[e.sample] + ", " +
                       codecs[e.codec] + ", " + criteria[e.criterion] + ")");
    }
    seen[idx] = true;
    values[idx] = e.value;
  }
  std::vector<std::string> missing;
  for (std::size_t h = 0; h < codecs.size() && missing.size() < 10; ++h) {
    for (std::size_t c = 0; c < criteria.size() && missing.size() < 10; ++c) {
      for (std::size_t i = 0; i < m && missing.size() < 10; ++i) {
        if (!seen[(h * criteria.size() + c) * m + i]) {
          missing.push_back("(" + samples[i] + ", " + codecs[h] + ", " + criteria[c] + ")");
        }
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = source_name + ": matrix is not dense; missing triples:";
    for (const auto& t : missing) msg += " " + t;
    throw InputError(msg);
  }
  return CriterionMatrix(std::move(codecs), std::move(criteria), std::move(samples),
                         std::move(values));
}

void save_matrix(const CriterionMatrix& matrix, std::ostream& out) {
  out << "sample_id,codec_id,criterion_id,value\n";
  for (std::size_t i = 0; i < matrix.num_samples(); ++i) {
    for (std::size_t h = 0; h < matrix.num_codecs(); ++h) {
      for (std::size_t c = 0; c < matrix.num_criteria(); ++c) {
        out << matrix.sample_ids()[i] << ',' << matrix.codec_ids()[h] << ','
            << matrix.criterion_ids()[c] << ',' << format_double(matrix.value(h, c, i))
            << '\n';
      }
    }
  }
}

void save_matrix(const CriterionMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  save_matrix(matrix, out);
}

Objective parse_objective(const std::string& text) {
  Objective objective;
  for (const auto& part : split(text, ',')) {
    const auto fields = split(trim(part), ':');
    if (fields.size() != 2) {
      throw ConfigurationError("objective term '" + part + "' is not id:weight");
    }
    const std::string id = trim(fields[0]);
    if (id.empty()) throw ConfigurationError("objective term '" + part + "' has an empty id");
    if (objective.weights.count(id)) {
      throw ConfigurationError("objective repeats criterion '" + id + "'");
    }
    try {
      objective.weights[id] = parse_double(fields[1], "objective weight for '" + id + "'");
    } catch (const InputError& e) {
      throw ConfigurationError(e.what());
    }
  }
  objective.validate();
  return objective;
}

std::string format_objective(const Objective& objective) {
  std::string out;
  for (const auto& [id, w] : objective.weights) {
    if (!out.empty()) out += ",";
    out += id + ":" + format_double(w);
  }
  return out;
}

ConstraintSpace::HalfSpace parse_constraint(const std::string& text) try {
  const auto sides = split(text, '<');
  if (sides.size() != 2 || sides[1].empty() || sides[1][0] != '=') {
    throw ConfigurationError("constraint '" + text + "' must use the form a*c1+b*c2<=bound");
  }
  ConstraintSpace::HalfSpace hs;
  hs.bound = parse_double(sides[1].substr(1), "constraint bound in '" + text + "'");

  // left side: signed terms, each `coeff*id` or a bare `id`
  std::string lhs;
  for (char ch : sides[0]) {
    if (ch != ' ' && ch != '\t') lhs += ch;
  }
  if (lhs.empty()) throw ConfigurationError("constraint '" + text + "' has an empty left side");
  std::vector<std::string> terms;
  std::string current;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const char ch = lhs[i];
    const bool sign_start = (ch == '+' || ch == '-') && i > 0 &&
                            (std::isalnum(static_cast<unsigned char>(lhs[i - 1])) ||
                             lhs[i - 1] == '_' || lhs[i - 1] == '.');
    if (sign_start) {
      terms.push_back(current);
      current.clear();
    }
    current += ch;
  }
  terms.push_back(current);
  for (const auto& term : terms) {
    std::string body = term;
    double sign = 1.0;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      sign = body[0] == '-' ? -1.0 : 1.0;
      body = body.substr(1);
    }
    if (body.empty()) throw ConfigurationError("constraint '" + text + "' has an empty term");
    const auto star = body.find('*');
    double coeff = 1.0;
    std::string id = body;
    if (star != std::string::npos) {
      coeff = parse_double(body.substr(0, star), "constraint coefficient in '" + text + "'");
      id = body.substr(star + 1);
    }
    if (id.empty() || std::isdigit(static_cast<unsigned char>(id[0]))) {
      throw ConfigurationError("constraint term '" + term + "' has no criterion id");
    }
    hs.coeffs[id] += sign * coeff;
  }
  return hs;
} catch (const InputError& e) {
  throw ConfigurationError(e.what());
}

std::string format_constraint(const ConstraintSpace::HalfSpace& halfspace) {
  std::string out;
  for (const auto& [id, a] : halfspace.coeffs) {
    if (!out.empty()) out += "+";
    out += format_double(a) + "*" + id;
  }
  return out + "<=" + format_double(halfspace.bound);
}

KeyValues parse_key_values(std::istream& in, const std::string& source_name) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InputError(source_name + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) {
      throw InputError(source_name + ":" + std::to_string(line_no) + ": empty key");
    }
    kv.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return kv;
}

KeyValues load_key_values(const std::string& path) {
  auto in = open_file(path);
  return parse_key_values(in, path);
}

namespace {

DistSpec parse_dist(const std::string& text, const std::string& where) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw InputError(where + ": expected kind(args), got '" + text + "'");
  }
  const std::string kind = trim(text.substr(0, open));
  const auto args_text = text.substr(open + 1, text.size() - open - 2);
  std::vector<double> args;
  for (const auto& part : split(args_text, ',')) args.push_back(parse_double(part, where));
  const auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw InputError(where + ": " + kind + " takes " + std::to_string(n) + " arguments");
    }
  };
  try {
    if (kind == "point") {
      need(1);
      return DistSpec::point(args[0]);
    }
    if (kind == "uniform") {
      need(2);
      return DistSpec::uniform(args[0], args[1]);
    }
    if (kind == "beta") {
      need(2);
      return DistSpec::beta(args[0], args[1]);
    }
    if (kind == "truncgauss") {
      need(2);
      return DistSpec::truncated_gaussian(args[0], args[1]);
    }
    if (kind == "gaussian") {
      need(2);
      return DistSpec::gaussian(args[0], args[1]);
    }
  } catch (const ConfigurationError& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": unknown distribution '" + kind + "'");
}

std::string dist_text(const DistSpec& spec) {
  switch (spec.kind) {
    case DistKind::point: return "point(" + format_double(spec.a) + ")";
    case DistKind::uniform:
      return "uniform(" + format_double(spec.a) + "," + format_double(spec.b) + ")";
    case DistKind::beta:
      return "beta(" + format_double(spec.a) + "," + format_double(spec.b) + ")";
    case DistKind::truncated_gaussian:
      return "truncgauss(" + format_double(spec.a) + "," + format_double(spec.b) + ")";
    case DistKind::gaussian:
      return "gaussian(" + format_double(spec.a) + "," + format_double(spec.b) + ")";
  }
  return "";
}

std::vector<std::string> parse_id_list(const std::string& text, const std::string& where) {
  std::vector<std::string> ids;
  for (const auto& part : split(text, ',')) {
    const std::string id = trim(part);
    if (id.empty()) throw InputError(where + ": empty id in list '" + text + "'");
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

SyntheticWorld parse_world(const KeyValues& kv, const std::string& source_name) {
  std::vector<std::string> codecs, criteria;
  std::uint64_t seed = 0;
  std::map<std::pair<std::string, std::string>, DistSpec> dists;
  for (const auto& [key, value] : kv) {
    if (key == "codecs") {
      codecs = parse_id_list(value, source_name);
    } else if (key == "criteria") {
      criteria = parse_id_list(value, source_name);
    } else if (key == "seed") {
      seed = parse_uint(value, source_name + " seed");
    } else if (key.rfind("dist.", 0) == 0) {
      const auto parts = split(key, '.');
      if (parts.size() != 3) {
        throw InputError(source_name + ": world key '" + key +
                         "' must be dist.<codec>.<criterion>");
      }
      dists[{parts[1], parts[2]}] = parse_dist(value, source_name + " " + key);
    } else {
      throw InputError(source_name + ": unknown world key '" + key + "'");
    }
  }
  if (codecs.empty() || criteria.empty()) {
    throw InputError(source_name + ": world needs 'codecs' and 'criteria' lists");
  }
  std::vector<DistSpec> cells;
  cells.reserve(codecs.size() * criteria.size());
  for (const auto& h : codecs) {
    for (const auto& c : criteria) {
      auto it = dists.find({h, c});
      if (it == dists.end()) {
        throw InputError(source_name + ": missing dist." + h + "." + c);
      }
      cells.push_back(it->second);
    }
  }
  if (dists.size() != cells.size()) {
    throw InputError(source_name + ": world has dist lines for unknown codec/criterion pairs");
  }
  return SyntheticWorld(std::move(codecs), std::move(criteria), std::move(cells), seed);
}

SyntheticWorld load_world(const std::string& path) {
  return parse_world(load_key_values(path), path);
}

void save_world(const SyntheticWorld& world, std::ostream& out) {
  const auto join = [](const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) {
      if (!s.empty()) s += ",";
      s += id;
    }
    return s;
  };
  out << "codecs = " << join(world.codec_ids) << "\n";
  out << "criteria = " << join(world.criterion_ids) << "\n";
  out << "seed = " << world.seed << "\n";
  for (std::size_t h = 0; h < world.codec_ids.size(); ++h) {
    for (std::size_t c = 0; c < world.criterion_ids.size(); ++c) {
      out << "dist." << world.codec_ids[h] << "." << world.criterion_ids[c] << " = "
          << dist_text(world.dist(h, c)) << "\n";
    }
  }
}

BoundMethod parse_method(const std::string& name) {
  if (name == "finite-emd") return BoundMethod::finite_sample_emd;
  if (name == "asymptotic-emd") return BoundMethod::asymptotic_emd;
  if (name == "hoeffding") return BoundMethod::hoeffding_union;
  if (name == "gaussian-chernoff") return BoundMethod::gaussian_chernoff_union;
  throw ConfigurationError(
      "unknown method '" + name +
      "'; expected finite-emd, asymptotic-emd, hoeffding or gaussian-chernoff");
}

std::string method_name(BoundMethod method) {
  switch (method) {
    case BoundMethod::finite_sample_emd: return "finite-emd";
    case BoundMethod::asymptotic_emd: return "asymptotic-emd";
    case BoundMethod::hoeffding_union: return "hoeffding";
    case BoundMethod::gaussian_chernoff_union: return "gaussian-chernoff";
  }
  return "unknown";
}

RunConfig build_run_config(const KeyValues& file_keys, const KeyValues& cli_keys) {
  // last value wins within a source; cli wins over file; constraints append
  std::map<std::string, std::string> merged;
  std::vector<std::string> constraints;
  const auto absorb = [&](const KeyValues& kv) {
    bool constraints_reset = false;
    for (const auto& [key, value] : kv) {
      if (key == "constraint") {
        if (&kv == &cli_keys && !constraints_reset) {
          constraints.clear();  // explicit flags replace file constraints
          constraints_reset = true;
        }
        constraints.push_back(value);
      } else {
        merged[key] = value;
      }
    }
  };
  absorb(file_keys);
  absorb(cli_keys);

  static const std::set<std::string> known = {"matrix", "world",  "method", "delta",
                                              "epsilon", "s0",    "m",      "seed",
                                              "shuffle", "trials", "objective", "out",
                                              "trace-out"};
  for (const auto& [key, value] : merged) {
    if (!known.count(key)) throw ConfigurationError("unknown configuration key '" + key + "'");
  }

  RunConfig cfg;
  const auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = merged.find(key);
    if (it == merged.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("matrix")) cfg.matrix_path = *v;
  if (auto v = get("world")) cfg.world_path = *v;
  if (auto v = get("method")) cfg.method = parse_method(*v);
  if (auto v = get("delta")) cfg.delta = parse_double(*v, "delta");
  if (auto v = get("epsilon")) cfg.epsilon = parse_double(*v, "epsilon");
  if (auto v = get("s0")) cfg.s0 = parse_uint(*v, "s0");
  if (auto v = get("m")) cfg.m = parse_uint(*v, "m");
  if (auto v = get("seed")) cfg.seed = parse_uint(*v, "seed");
  if (auto v = get("trials")) cfg.trials = parse_uint(*v, "trials");
  if (auto v = get("shuffle")) {
    if (*v == "true" || *v == "1") {
      cfg.shuffle = true;
    } else if (*v == "false" || *v == "0") {
      cfg.shuffle = false;
    } else {
      throw ConfigurationError("shuffle must be true or false, got '" + *v + "'");
    }
  }
  if (auto v = get("objective")) cfg.objective = parse_objective(*v);
  if (auto v = get("out")) cfg.out_path = *v;
  if (auto v = get("trace-out")) cfg.trace_path = *v;
  for (const auto& text : constraints) {
    cfg.constraints.halfspaces.push_back(parse_constraint(text));
  }

  if (cfg.matrix_path.has_value() == cfg.world_path.has_value()) {
    throw ConfigurationError("exactly one of 'matrix' and 'world' must be given");
  }
  if (cfg.world_path && cfg.m < 2) {
    throw ConfigurationError("a world input needs m >= 2 samples to draw");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw ConfigurationError("delta must lie in (0,1), got " + format_double(cfg.delta));
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw ConfigurationError("epsilon must lie in (0,1), got " + format_double(cfg.epsilon));
  }
  if (cfg.s0 < 2) throw ConfigurationError("s0 must be >= 2");
  return cfg;
}

CriterionMatrix materialize_matrix(const RunConfig& cfg) {
  if (cfg.matrix_path) {
    CriterionMatrix matrix = load_matrix(*cfg.matrix_path);
    if (cfg.shuffle) return matrix.shuffled(cfg.seed);
    return matrix;
  }
  const SyntheticWorld world = load_world(*cfg.world_path);
  CriterionMatrix matrix = sample_matrix(world, cfg.m, cfg.seed);
  if (cfg.shuffle) return matrix.shuffled(cfg.seed);
  return matrix;
}

std::string render_report(const SelectionReport& report, const RunConfig& cfg,
                          const std::string& algorithm,
                          const std::vector<std::string>& codec_order,
                          const std::vector<std::string>& criterion_order) {
  std::ostringstream out;
  const auto join = [](const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) {
      if (!s.empty()) s += ",";
      s += id;
    }
    return s;
  };
  out << "algorithm = " << algorithm << "\n";
  if (cfg.matrix_path) out << "matrix = " << *cfg.matrix_path << "\n";
  if (cfg.world_path) {
    out << "world = " << *cfg.world_path << "\n";
    out << "m = " << cfg.m << "\n";
  }
  out << "method = " << method_name(cfg.method) << "\n";
  out << "delta = " << format_double(cfg.delta) << "\n";
  if (algorithm == "psp") {
    out << "epsilon = " << format_double(cfg.epsilon) << "\n";
    out << "s0 = " << cfg.s0 << "\n";
  }
  out << "seed = " << cfg.seed << "\n";
  out << "shuffle = " << (cfg.shuffle ? "true" : "false") << "\n";
  out << "objective = " << format_objective(cfg.objective) << "\n";
  for (const auto& hs : cfg.constraints.halfspaces) {
    out << "constraint = " << format_constraint(hs) << "\n";
  }
  out << "codecs = " << join(codec_order) << "\n";
  out << "criteria = " << join(criterion_order) << "\n";
  out << "samples_used = " << report.samples_used << "\n";
  out << "iterations = " << report.trace.size() << "\n";
  out << "terminated_reason = " << to_string(report.terminated_reason) << "\n";
  out << "certified = " << (report.certified ? "true" : "false") << "\n";
  out << "no_feasible_codec = " << (report.no_feasible_codec ? "true" : "false") << "\n";
  out << "liberal = " << join(report.liberal_set) << "\n";
  out << "conservative = " << join(report.conservative_set) << "\n";
  if (report.sandwich.lower) {
    out << "sandwich.lower = " << format_double(*report.sandwich.lower) << "\n";
  }
  if (report.sandwich.upper) {
    out << "sandwich.upper = " << format_double(*report.sandwich.upper) << "\n";
  }
  for (const auto& h : codec_order) {
    for (const auto& c : criterion_order) {
      const CellKey key(h, c);
      auto est = report.estimates.find(key);
      if (est != report.estimates.end()) {
        out << "estimate." << h << "." << c << " = " << format_double(est->second) << "\n";
      }
      auto iv = report.rectangle.intervals.find(key);
      if (iv != report.rectangle.intervals.end()) {
        out << "interval." << h << "." << c << " = " << format_double(iv->second.lo) << ","
            << format_double(iv->second.hi) << "\n";
      }
    }
  }
  for (const auto& h : codec_order) {
    auto it = report.objective_intervals.find(h);
    if (it != report.objective_intervals.end()) {
      out << "objective_interval." << h << " = " << format_double(it->second.lo) << ","
          << format_double(it->second.hi) << "\n";
    }
  }
  return out.str();
}

std::string render_trace(const SelectionReport& report,
                         const std::vector<std::string>& codec_order,
                         const std::vector<std::string>& criterion_order) {
  std::ostringstream out;
  out << "iteration,codec_id,criterion_id,lo,hi,active,in_liberal,in_conservative\n";
  const auto member = [](const std::vector<std::string>& ids, const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end() ? '1' : '0';
  };
  for (const auto& entry : report.trace) {
    for (const auto& h : codec_order) {
      for (const auto& c : criterion_order) {
        auto it = entry.intervals.find(CellKey(h, c));
        if (it == entry.intervals.end()) continue;  // pruned before this round
        out << entry.iteration << ',' << h << ',' << c << ',' << format_double(it->second.lo)
            << ',' << format_double(it->second.hi) << ',' << member(entry.active_codecs, h)
            << ',' << member(entry.liberal, h) << ',' << member(entry.conservative, h) << '\n';
      }
    }
  }
  return out.str();
}

std::string render_coverage(const CoverageStats& stats) {
  std::ostringstream out;
  out << "trials = " << stats.trials << "\n";
  out << "config_rejections = " << stats.config_rejections << "\n";
  out << "failures.rectangle_miss = " << stats.rectangle_miss_failures << "\n";
  out << "failures.liberal_empty = " << stats.liberal_empty_failures << "\n";
  out << "failures.conservative = " << stats.conservative_failures << "\n";
  out << "failures.sandwich = " << stats.sandwich_failures << "\n";
  out << "failures.optimum_pruned = " << stats.optimum_pruned_failures << "\n";
  out << "failures.simultaneous = " << stats.simultaneous_failures << "\n";
  out << "fraction.simultaneous = " << format_double(stats.simultaneous_fraction()) << "\n";
  return out.str();
}

}  // namespace codecsel
