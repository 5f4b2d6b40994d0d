#ifndef MINSUM_PROBLEM_IO_HPP
#define MINSUM_PROBLEM_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>

#include "minsum/dominance.hpp"
#include "minsum/problem.hpp"

namespace minsum {

using ParsedProblem = std::variant<QuadraticProblem, PairwiseObjective>;

/// Text format (grammar documented in the README): a `problem <kind> v1`
/// header, `n <count>`, then either `A i j value` / `b i value` entries
/// (1-based, i <= j) for quadratic problems or `node` / `edge` factor lines
/// for general ones. Rejects unknown families, duplicate entries, and
/// lower-triangle coordinates, with 1-based line numbers.
ParsedProblem parse_problem(std::istream& in);
ParsedProblem parse_problem_file(const std::string& path);

void write_problem(std::ostream& os, const QuadraticProblem& q);
/// Builtin factor families only (custom factors are not serialisable).
void write_problem(std::ostream& os, const PairwiseObjective& obj);

void write_certificate(std::ostream& os, const DominanceCertificate& cert);
DominanceCertificate parse_certificate(std::istream& in);
DominanceCertificate parse_certificate_file(const std::string& path);

/// Random quadratic instance on a regular-ish graph with the diagonal
/// scaled so that certify_quadratic comes out at or below lambda_target.
/// Off-diagonals are uniform +-[0.1, 1], b is uniform [-1, 1]; fully
/// deterministic per seed.
QuadraticProblem generate_random_sdd(int n, int degree, double lambda_target,
                                     std::uint64_t seed);

/// Same weight scheme on a uniform random recursive tree.
QuadraticProblem generate_tree_sdd(int n, double lambda_target,
                                   std::uint64_t seed);

/// Random spanning tree plus extra chords (loopy test instances).
QuadraticProblem generate_loopy_sdd(int n, int extra_edges,
                                    double lambda_target, std::uint64_t seed);

}  // namespace minsum

#endif
