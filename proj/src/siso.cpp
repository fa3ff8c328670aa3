#include "itc/siso.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace itc {

namespace {

constexpr int kS = Trellis::kNumStates;
constexpr double kUnreached = kNegInf / 2;

struct GammaTable {
  // metric[u][p] for systematic bit u and parity bit p
  double metric[2][2];
};

// Half-LLR branch metrics: log P(bit=b|L) = +L/2 for b=0, -L/2 for b=1, up
// to a constant that cancels in every LLR output.
GammaTable gamma_at(const SisoInput& in, Index k, Index m) {
  double ls, lp;
  if (k < m) {
    ls = in.systematic[k] + in.apriori[k];
    lp = in.parity[k];
  } else {
    ls = in.tail_systematic[static_cast<std::size_t>(k - m)];
    lp = in.tail_parity[static_cast<std::size_t>(k - m)];
  }
  GammaTable g;
  for (int u = 0; u < 2; ++u) {
    for (int p = 0; p < 2; ++p) {
      g.metric[u][p] = 0.5 * (u ? -ls : ls) + 0.5 * (p ? -lp : lp);
    }
  }
  return g;
}

}  // namespace

SisoOutput log_map_decode(const SisoInput& input, const Trellis& trellis,
                          MaxStarMode mode) {
  const Index m = input.systematic.size();
  if (input.parity.size() != m || input.apriori.size() != m) {
    throw std::invalid_argument(
        "log_map_decode: systematic/parity/apriori lengths differ (" +
        std::to_string(m) + ", " + std::to_string(input.parity.size()) + ", " +
        std::to_string(input.apriori.size()) + ")");
  }
  const Index steps = m + Trellis::kMemory;

  // Tail steps run with free inputs; only the termination choice at each
  // state can reach state 0 after kMemory steps, so anchoring beta there is
  // equivalent to forcing the tail.
  std::vector<std::array<double, kS>> alpha(
      static_cast<std::size_t>(steps) + 1);
  alpha[0].fill(kNegInf);
  alpha[0][0] = 0.0;
  for (Index k = 0; k < steps; ++k) {
    const GammaTable g = gamma_at(input, k, m);
    const auto& a = alpha[static_cast<std::size_t>(k)];
    auto& an = alpha[static_cast<std::size_t>(k) + 1];
    an.fill(kNegInf);
    for (int s = 0; s < kS; ++s) {
      if (a[s] < kUnreached) continue;
      for (int u = 0; u < 2; ++u) {
        const int ns = trellis.next_state[s][u];
        const int p = trellis.parity_out[s][u];
        an[ns] = max_star(an[ns], a[s] + g.metric[u][p], mode);
      }
    }
    double amax = an[0];
    for (int s = 1; s < kS; ++s) amax = an[s] > amax ? an[s] : amax;
    for (int s = 0; s < kS; ++s) an[s] -= amax;
  }

  std::array<double, kS> beta;
  beta.fill(kNegInf);
  beta[0] = 0.0;

  SisoOutput out;
  out.extrinsic.resize(m);
  out.app.resize(m);

  std::array<double, kS> beta_next;
  for (Index k = steps - 1; k >= 0; --k) {
    const GammaTable g = gamma_at(input, k, m);
    beta_next = beta;
    const auto& a = alpha[static_cast<std::size_t>(k)];

    if (k < m) {
      double num = kNegInf;  // u = 0
      double den = kNegInf;  // u = 1
      for (int s = 0; s < kS; ++s) {
        if (a[s] < kUnreached) continue;
        for (int u = 0; u < 2; ++u) {
          const int ns = trellis.next_state[s][u];
          if (beta_next[ns] < kUnreached) continue;
          const int p = trellis.parity_out[s][u];
          const double path = a[s] + g.metric[u][p] + beta_next[ns];
          if (u == 0) {
            num = max_star(num, path, mode);
          } else {
            den = max_star(den, path, mode);
          }
        }
      }
      out.app[k] = num - den;
      out.extrinsic[k] = out.app[k] - input.systematic[k] - input.apriori[k];
    }

    for (int s = 0; s < kS; ++s) {
      double b = kNegInf;
      for (int u = 0; u < 2; ++u) {
        const int ns = trellis.next_state[s][u];
        if (beta_next[ns] < kUnreached) continue;
        const int p = trellis.parity_out[s][u];
        b = max_star(b, g.metric[u][p] + beta_next[ns], mode);
      }
      beta[s] = b;
    }
    double bmax = beta[0];
    for (int s = 1; s < kS; ++s) bmax = beta[s] > bmax ? beta[s] : bmax;
    for (int s = 0; s < kS; ++s) beta[s] -= bmax;
  }

  return out;
}

}  // namespace itc
