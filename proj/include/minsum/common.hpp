#ifndef MINSUM_COMMON_HPP
#define MINSUM_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace minsum {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file; carries the 1-based line number.
struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& msg)
      : Error("parse error at line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

/// A message denominator a_{i->j} (or a node denominator) became
/// non-positive, i.e. the dominance assumption behind the recursion failed.
/// `to == -1` marks a node-estimate denominator, `from`/`to` are 0-based.
struct WellPosednessError : Error {
  int from, to, iteration;
  double value;
  WellPosednessError(int from_, int to_, int iteration_, double value_)
      : Error(to_ >= 0
                  ? "well-posedness failure: a_{" + std::to_string(from_) +
                        "->" + std::to_string(to_) + "} = " +
                        std::to_string(value_) + " <= 0 at iteration " +
                        std::to_string(iteration_)
                  : "well-posedness failure: estimate denominator at node " +
                        std::to_string(from_) + " = " + std::to_string(value_) +
                        " <= 0 at iteration " + std::to_string(iteration_)),
        from(from_), to(to_), iteration(iteration_), value(value_) {}
};

/// A 1-D minimiser landed on (or next to) a grid boundary; the grid domain
/// does not bracket the true minimiser and results would be silently wrong.
struct DomainTooSmallError : Error {
  int node;
  double at;
  DomainTooSmallError(int node_, double at_, const std::string& ctx)
      : Error("grid domain of node " + std::to_string(node_) +
              " too small: minimiser at boundary x = " + std::to_string(at_) +
              " (" + ctx + ")"),
        node(node_), at(at_) {}
};

struct PowerIterationError : Error {
  using Error::Error;
};

struct TreeSizeError : Error {
  std::size_t projected;
  TreeSizeError(std::size_t projected_, std::size_t cap)
      : Error("computation tree would have " + std::to_string(projected_) +
              " nodes, exceeding the cap of " + std::to_string(cap)),
        projected(projected_) {}
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Deterministic uniform deviates. mt19937_64 output is pinned by the
/// standard; std::uniform_real_distribution is not, so bits are mapped to
/// doubles explicitly to keep generated problems identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Inclusive on both ends.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace minsum

#endif
