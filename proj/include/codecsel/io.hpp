#ifndef CODECSEL_IO_HPP
#define CODECSEL_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codecsel/synth.hpp"
#include "codecsel/types.hpp"

namespace codecsel {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/**
 * Long-form matrix text: UTF-8, one `sample_id,codec_id,criterion_id,value`
 * triple per line under that exact header, dense over the cross product of
 * the ids seen.  Axis order follows first appearance; for samples that order
 * fixes the discrepancy statistic's sign assignment, so it is part of the
 * format contract.
 */
CriterionMatrix load_matrix(const std::string& path);
CriterionMatrix parse_matrix(std::istream& in, const std::string& source_name);
void save_matrix(const CriterionMatrix& matrix, std::ostream& out);
void save_matrix(const CriterionMatrix& matrix, const std::string& path);

/// `id:weight[,id:weight...]`
Objective parse_objective(const std::string& text);
std::string format_objective(const Objective& objective);

/// `a1*c1+a2*c2<=b`; terms may omit the coefficient (`c1<=0.5`) and carry
/// signs (`-0.5*c1+c2<=0.1`).  Only `<=` is accepted; flip signs for lower
/// bounds.
ConstraintSpace::HalfSpace parse_constraint(const std::string& text);
std::string format_constraint(const ConstraintSpace::HalfSpace& halfspace);

/// Flat key-value text: `key = value` per line, `#` comments, repeated keys
/// allowed (order preserved).
using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues parse_key_values(std::istream& in, const std::string& source_name);
KeyValues load_key_values(const std::string& path);

/// World description in the key-value format: `codecs`, `criteria`, `seed`,
/// and one `dist.<codec>.<criterion> = kind(args)` line per cell
/// (point/uniform/beta/truncgauss/gaussian).
SyntheticWorld parse_world(const KeyValues& kv, const std::string& source_name);
SyntheticWorld load_world(const std::string& path);
void save_world(const SyntheticWorld& world, std::ostream& out);

BoundMethod parse_method(const std::string& name);
std::string method_name(BoundMethod method);

/// Run settings shared by the selection subcommands.  Exactly one of
/// matrix_path / world_path must be set; worlds are sampled to `m` draws.
struct RunConfig {
  std::optional<std::string> matrix_path;
  std::optional<std::string> world_path;
  BoundMethod method = BoundMethod::hoeffding_union;
  double delta = 0.01;
  double epsilon = 0.05;
  std::size_t s0 = 25;
  std::size_t m = 0;                // draws from a world; 0 = required when world given
  std::uint64_t seed = 0;
  bool shuffle = false;             // seeded sample shuffle before sign assignment
  std::size_t trials = 1000;        // coverage runs
  Objective objective;
  ConstraintSpace constraints;
  std::optional<std::string> out_path;
  std::optional<std::string> trace_path;
};

/// Builds and validates a RunConfig from file keys overlaid with command-line
/// keys (command line wins key by key).
RunConfig build_run_config(const KeyValues& file_keys, const KeyValues& cli_keys);

/// Loads the configured input: a matrix file, or a sampled world.
CriterionMatrix materialize_matrix(const RunConfig& cfg);

/// Deterministic key-value report; every number reproduces the library call
/// it came from.
std::string render_report(const SelectionReport& report, const RunConfig& cfg,
                          const std::string& algorithm,
                          const std::vector<std::string>& codec_order,
                          const std::vector<std::string>& criterion_order);

/// Per-iteration trace rows: iteration, codec, criterion, interval ends,
/// survival and selection flags.  Row order is (iteration, codec, criterion).
std::string render_trace(const SelectionReport& report,
                         const std::vector<std::string>& codec_order,
                         const std::vector<std::string>& criterion_order);

std::string render_coverage(const CoverageStats& stats);

}  // namespace codecsel

#endif  // CODECSEL_IO_HPP
