#include "codecsel/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace codecsel {

namespace {

void check_axis(const std::vector<std::string>& ids, const char* name) {
  if (ids.empty()) {
    throw ConfigurationError(std::string(name) + " axis must be nonempty");
  }
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw ConfigurationError(std::string("duplicate ") + name + " id '" + id + "'");
    }
  }
}

std::uint64_t splitmix64_step(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CriterionMatrix::CriterionMatrix(std::vector<std::string> codec_ids,
                                 std::vector<std::string> criterion_ids,
                                 std::vector<std::string> sample_ids,
                                 std::vector<double> values)
    : codec_ids_(std::move(codec_ids)),
      criterion_ids_(std::move(criterion_ids)),
      sample_ids_(std::move(sample_ids)),
      values_(std::move(values)) {
  check_axis(codec_ids_, "codec");
  check_axis(criterion_ids_, "criterion");
  check_axis(sample_ids_, "sample");
  const std::size_t expected = codec_ids_.size() * criterion_ids_.size() * sample_ids_.size();
  if (values_.size() != expected) {
    throw ConfigurationError("value count " + std::to_string(values_.size()) +
                             " does not match dense shape " + std::to_string(expected));
  }
  for (std::size_t h = 0; h < num_codecs(); ++h) {
    for (std::size_t c = 0; c < num_criteria(); ++c) {
      for (std::size_t i = 0; i < num_samples(); ++i) {
        if (!std::isfinite(value(h, c, i))) {
          throw ConfigurationError("non-finite value at codec '" + codec_ids_[h] +
                                   "', criterion '" + criterion_ids_[c] + "', sample '" +
                                   sample_ids_[i] + "'");
        }
      }
    }
  }
}

double CriterionMatrix::mean(std::size_t codec, std::size_t criterion) const {
  double acc = 0.0;
  const std::size_t m = num_samples();
  for (std::size_t i = 0; i < m; ++i) acc += value(codec, criterion, i);
  return acc / static_cast<double>(m);
}

std::optional<std::size_t> CriterionMatrix::codec_index(const std::string& id) const {
  auto it = std::find(codec_ids_.begin(), codec_ids_.end(), id);
  if (it == codec_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - codec_ids_.begin());
}

std::optional<std::size_t> CriterionMatrix::criterion_index(const std::string& id) const {
  auto it = std::find(criterion_ids_.begin(), criterion_ids_.end(), id);
  if (it == criterion_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - criterion_ids_.begin());
}

std::size_t CriterionMatrix::require_codec(const std::string& id) const {
  if (auto idx = codec_index(id)) return *idx;
  throw ConfigurationError("unknown codec id '" + id + "'");
}

std::size_t CriterionMatrix::require_criterion(const std::string& id) const {
  if (auto idx = criterion_index(id)) return *idx;
  throw ConfigurationError("unknown criterion id '" + id + "'");
}

bool CriterionMatrix::in_unit_range() const { return !first_out_of_range().has_value(); }

std::optional<std::tuple<std::string, std::string, std::string>>
CriterionMatrix::first_out_of_range() const {
  for (std::size_t h = 0; h < num_codecs(); ++h) {
    for (std::size_t c = 0; c < num_criteria(); ++c) {
      for (std::size_t i = 0; i < num_samples(); ++i) {
        const double v = value(h, c, i);
        if (v < 0.0 || v > 1.0) {
          return std::make_tuple(codec_ids_[h], criterion_ids_[c], sample_ids_[i]);
        }
      }
    }
  }
  return std::nullopt;
}

CriterionMatrix CriterionMatrix::slice(const std::vector<std::size_t>& codecs,
                                       std::size_t sample_begin,
                                       std::size_t sample_count) const {
  if (sample_begin + sample_count > num_samples()) {
    throw ConfigurationError("sample window [" + std::to_string(sample_begin) + ", " +
                             std::to_string(sample_begin + sample_count) +
                             ") exceeds sample count " + std::to_string(num_samples()));
  }
  std::vector<std::string> codec_ids;
  codec_ids.reserve(codecs.size());
  for (std::size_t h : codecs) codec_ids.push_back(codec_ids_.at(h));
  std::vector<std::string> sample_ids(sample_ids_.begin() + sample_begin,
                                      sample_ids_.begin() + sample_begin + sample_count);
  std::vector<double> values;
  values.reserve(codecs.size() * num_criteria() * sample_count);
  for (std::size_t h : codecs) {
    for (std::size_t c = 0; c < num_criteria(); ++c) {
      for (std::size_t i = 0; i < sample_count; ++i) {
        values.push_back(value(h, c, sample_begin + i));
      }
    }
  }
  return CriterionMatrix(std::move(codec_ids), criterion_ids_, std::move(sample_ids),
                         std::move(values));
}

CriterionMatrix CriterionMatrix::shuffled(std::uint64_t seed) const {
  const std::size_t m = num_samples();
  std::vector<std::size_t> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = i;
  std::uint64_t state = seed;
  for (std::size_t i = m; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(splitmix64_step(state) % i);
    std::swap(perm[i - 1], perm[j]);
  }
  std::vector<std::string> sample_ids(m);
  for (std::size_t i = 0; i < m; ++i) sample_ids[i] = sample_ids_[perm[i]];
  std::vector<double> values(values_.size());
  for (std::size_t h = 0; h < num_codecs(); ++h) {
    for (std::size_t c = 0; c < num_criteria(); ++c) {
      for (std::size_t i = 0; i < m; ++i) {
        values[(h * num_criteria() + c) * m + i] = value(h, c, perm[i]);
      }
    }
  }
  return CriterionMatrix(codec_ids_, criterion_ids_, std::move(sample_ids), std::move(values));
}

void Objective::validate() const {
  bool any_positive = false;
  for (const auto& [id, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigurationError("objective weight for '" + id + "' must be finite and >= 0");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) {
    throw ConfigurationError("objective needs at least one positive weight");
  }
}

void Objective::validate_against(const std::vector<std::string>& criteria) const {
  validate();
  for (const auto& [id, w] : weights) {
    if (std::find(criteria.begin(), criteria.end(), id) == criteria.end()) {
      throw ConfigurationError("objective references unknown criterion '" + id + "'");
    }
  }
}

double Objective::value(const std::map<std::string, double>& means) const {
  double acc = 0.0;
  for (const auto& [id, w] : weights) {
    if (w == 0.0) continue;
    auto it = means.find(id);
    if (it == means.end()) {
      throw ConfigurationError("objective criterion '" + id + "' has no value");
    }
    acc += w * it->second;
  }
  return acc;
}

void ConstraintSpace::validate_against(const std::vector<std::string>& criteria) const {
  for (const auto& hs : halfspaces) {
    if (!std::isfinite(hs.bound)) throw ConfigurationError("constraint bound must be finite");
    for (const auto& [id, a] : hs.coeffs) {
      if (!std::isfinite(a)) {
        throw ConfigurationError("constraint coefficient for '" + id + "' must be finite");
      }
      if (std::find(criteria.begin(), criteria.end(), id) == criteria.end()) {
        throw ConfigurationError("constraint references unknown criterion '" + id + "'");
      }
    }
  }
}

bool ConstraintSpace::contains(const std::map<std::string, double>& means) const {
  for (const auto& hs : halfspaces) {
    double acc = 0.0;
    for (const auto& [id, a] : hs.coeffs) {
      if (a == 0.0) continue;
      auto it = means.find(id);
      if (it == means.end()) {
        throw ConfigurationError("constraint criterion '" + id + "' has no value");
      }
      acc += a * it->second;
    }
    if (!(acc <= hs.bound)) return false;
  }
  return true;
}

bool ConfidenceRectangle::has(const std::string& codec, const std::string& criterion) const {
  return intervals.count(CellKey(codec, criterion)) > 0;
}

const Interval& ConfidenceRectangle::at(const std::string& codec,
                                        const std::string& criterion) const {
  auto it = intervals.find(CellKey(codec, criterion));
  if (it == intervals.end()) {
    throw ConfigurationError("no interval for codec '" + codec + "', criterion '" + criterion +
                             "'");
  }
  return it->second;
}

std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::singleton: return "singleton";
    case TerminationReason::epsilon_optimal: return "epsilon_optimal";
    case TerminationReason::samples_exhausted: return "samples_exhausted";
    case TerminationReason::not_applicable: return "not_applicable";
  }
  return "unknown";
}

std::string to_string(Feasibility f) {
  switch (f) {
    case Feasibility::certainly_feasible: return "certainly_feasible";
    case Feasibility::possibly_feasible: return "possibly_feasible";
    case Feasibility::certainly_infeasible: return "certainly_infeasible";
  }
  return "unknown";
}

Interval objective_interval(const ConfidenceRectangle& rect, const Objective& obj,
                            const std::string& codec) {
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& [id, w] : obj.weights) {
    if (w == 0.0) continue;
    if (!rect.has(codec, id)) {
      throw ConfigurationError("objective criterion '" + id + "' has no interval for codec '" +
                               codec + "'");
    }
    const Interval& iv = rect.at(codec, id);
    lo += w * iv.lo;
    hi += w * iv.hi;
  }
  return Interval{lo, hi};
}

Feasibility rectangle_vs_constraints(const ConfidenceRectangle& rect, const std::string& codec,
                                     const ConstraintSpace& space) {
  bool worst_ok = true;       // every half-space holds at its worst corner
  bool best_violated = false; // some half-space fails even at its best corner
  for (const auto& hs : space.halfspaces) {
    double worst = 0.0;
    double best = 0.0;
    for (const auto& [id, a] : hs.coeffs) {
      if (a == 0.0) continue;
      const Interval& iv = rect.at(codec, id);
      worst += a * (a > 0.0 ? iv.hi : iv.lo);
      best += a * (a > 0.0 ? iv.lo : iv.hi);
    }
    if (!(worst <= hs.bound)) worst_ok = false;
    if (best > hs.bound) best_violated = true;
  }
  if (worst_ok) return Feasibility::certainly_feasible;
  if (best_violated) return Feasibility::certainly_infeasible;
  return Feasibility::possibly_feasible;
}

}  // namespace codecsel
