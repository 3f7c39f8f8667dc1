#ifndef LTSKIT_SRC_LATTICE_HPP_
#define LTSKIT_SRC_LATTICE_HPP_

// DP over the monotone epsilon-placement lattice shared by both aligners.
// State (i, j) means i letters and j phones consumed; letter i either
// carries phone j (edge to (i+1, j+1)) or an epsilon (edge to (i+1, j)).
// Edge gates/scores are supplied by the caller, so the same loops serve
// unrestricted counting, allowables-restricted counting, and Viterbi.
// All loops run in a fixed order: results are deterministic.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace lts::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Row-major (n+1) x (m+1) table of doubles.
class Grid {
 public:
  Grid(std::size_t n, std::size_t m, double fill)
      : cols_(m + 1), cells_((n + 1) * (m + 1), fill) {}
  double& at(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const {
    return cells_[i * cols_ + j];
  }

 private:
  std::size_t cols_;
  std::vector<double> cells_;
};

// Paths from (0,0) into each state. pair_ok(i, j) gates letter i carrying
// phone j; eps_ok(i) gates letter i carrying an epsilon.
template <class PairOk, class EpsOk>
Grid forward_counts(std::size_t n, std::size_t m, PairOk pair_ok,
                    EpsOk eps_ok) {
  Grid f(n, m, 0.0);
  f.at(0, 0) = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j) {
      double c = f.at(i, j);
      if (c == 0.0) continue;
      if (eps_ok(i)) f.at(i + 1, j) += c;
      if (j < m && pair_ok(i, j)) f.at(i + 1, j + 1) += c;
    }
  return f;
}

// Paths from each state to (n, m).
template <class PairOk, class EpsOk>
Grid backward_counts(std::size_t n, std::size_t m, PairOk pair_ok,
                     EpsOk eps_ok) {
  Grid b(n, m, 0.0);
  b.at(n, m) = 1.0;
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = 0; j <= m; ++j) {
      double c = 0.0;
      if (eps_ok(i)) c += b.at(i + 1, j);
      if (j < m && pair_ok(i, j)) c += b.at(i + 1, j + 1);
      b.at(i, j) = c;
    }
  return b;
}

// Path scores are compared in fixed point: each edge's log-probability is
// quantized to 2^-40 once, and states accumulate exact integer sums. Plain
// double prefixes pick up order-dependent rounding, which lets two paths
// that tie over the full word compare unequal mid-lattice — and then the
// per-state tie rule no longer reproduces the brute-force argmax. Integer
// sums are associative and strictly monotone, so the local rule provably
// selects the global optimum under the quantized objective (ties closer
// than ~1e-12 in log space fall to the epsilon rule, which is the point).
inline constexpr double kScoreScale = 1099511627776.0;  // 2^40
inline constexpr std::int64_t kQNegInf =
    std::numeric_limits<std::int64_t>::min();

inline std::int64_t quantize_score(double s) {
  return s == kNegInf ? kQNegInf : std::llround(s * kScoreScale);
}

// Max-score path from (0,0) to (n,m). score_pair(i, j) / score_eps(i)
// return kNegInf for a forbidden edge. Ties are resolved toward epsilons
// at the rightmost feasible letters: an epsilon edge wins an exact tie
// into a state, and the backtrack from (n, m) then assigns epsilons to
// the latest letters first. Returns false when (n, m) is unreachable;
// otherwise fills eps_at (one flag per letter) and the path score (the
// plain double sum of the chosen path's edges, left to right).
template <class ScorePair, class ScoreEps>
bool lattice_viterbi(std::size_t n, std::size_t m, ScorePair score_pair,
                     ScoreEps score_eps, std::vector<char>* eps_at,
                     double* score) {
  std::vector<std::int64_t> best((n + 1) * (m + 1), kQNegInf);
  std::vector<char> from_eps((n + 1) * (m + 1), 0);
  const std::size_t cols = m + 1;
  best[0] = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j) {
      const std::int64_t c = best[i * cols + j];
      if (c == kQNegInf) continue;
      if (j < m) {
        const std::int64_t s = quantize_score(score_pair(i, j));
        if (s != kQNegInf && c + s > best[(i + 1) * cols + (j + 1)]) {
          best[(i + 1) * cols + (j + 1)] = c + s;
          from_eps[(i + 1) * cols + (j + 1)] = 0;
        }
      }
      const std::int64_t s = quantize_score(score_eps(i));
      if (s != kQNegInf && c + s >= best[(i + 1) * cols + j]) {
        best[(i + 1) * cols + j] = c + s;
        from_eps[(i + 1) * cols + j] = 1;
      }
    }
  if (best[n * cols + m] == kQNegInf) return false;
  eps_at->assign(n, 0);
  std::size_t i = n, j = m;
  while (i > 0) {
    if (from_eps[i * cols + j]) {
      (*eps_at)[i - 1] = 1;
      --i;
    } else {
      --i;
      --j;
    }
  }
  double total = 0.0;
  j = 0;
  for (i = 0; i < n; ++i)
    total += (*eps_at)[i] ? score_eps(i) : score_pair(i, j++);
  *score = total;
  return true;
}

}  // namespace lts::detail

#endif  // LTSKIT_SRC_LATTICE_HPP_
