#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace itc::oracle {

namespace {

struct Register {
  // newest feedback bit first
  std::array<int, 3> r{0, 0, 0};

  // returns the parity bit for input u and advances
  int step(int u) {
    const int feedback = r[1] ^ r[2];
    const int a = u ^ feedback;
    const int parity = a ^ r[0] ^ r[2];
    r = {a, r[0], r[1]};
    return parity;
  }

  int flush_input() const { return r[1] ^ r[2]; }
};

}  // namespace

RscRef rsc_reference(const std::vector<std::uint8_t>& input) {
  RscRef out;
  Register reg;
  out.parity.reserve(input.size());
  for (auto u : input) {
    out.parity.push_back(static_cast<std::uint8_t>(reg.step(u)));
  }
  for (int i = 0; i < 3; ++i) {
    const int u = reg.flush_input();
    out.tail_systematic[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(u);
    out.tail_parity[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(reg.step(u));
  }
  return out;
}

namespace {

double half_llr(double llr, int bit) { return bit == 0 ? 0.5 * llr : -0.5 * llr; }

void walk(const itc::SisoInput& in, int k, Register reg, double acc,
          std::size_t idx, std::vector<double>& metric) {
  const int m = static_cast<int>(in.systematic.size());
  if (k == m) {
    for (int i = 0; i < 3; ++i) {
      const int u = reg.flush_input();
      const int p = reg.step(u);
      acc += half_llr(in.tail_systematic[static_cast<std::size_t>(i)], u) +
             half_llr(in.tail_parity[static_cast<std::size_t>(i)], p);
    }
    metric[idx] = acc;
    return;
  }
  for (int u = 0; u < 2; ++u) {
    Register next = reg;
    const int p = next.step(u);
    const double a = acc +
                     half_llr(in.systematic[k] + in.apriori[k], u) +
                     half_llr(in.parity[k], p);
    walk(in, k + 1, next, a, idx | (static_cast<std::size_t>(u) << k),
         metric);
  }
}

}  // namespace

std::vector<double> exhaustive_app(const itc::SisoInput& input) {
  const int m = static_cast<int>(input.systematic.size());
  if (m < 1 || m > 24) {
    throw std::invalid_argument("exhaustive_app: length out of range");
  }
  if (input.parity.size() != m || input.apriori.size() != m) {
    throw std::invalid_argument("exhaustive_app: length mismatch");
  }

  std::vector<double> metric(std::size_t{1} << m);
  walk(input, 0, Register{}, 0.0, 0, metric);

  const double peak = *std::max_element(metric.begin(), metric.end());
  std::vector<double>& weight = metric;
  for (auto& v : weight) v = std::exp(v - peak);

  std::vector<double> app(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const std::size_t block = std::size_t{1} << k;
    double sum0 = 0.0;
    double sum1 = 0.0;
    for (std::size_t base = 0; base < weight.size(); base += 2 * block) {
      for (std::size_t j = 0; j < block; ++j) {
        sum0 += weight[base + j];
        sum1 += weight[base + block + j];
      }
    }
    app[static_cast<std::size_t>(k)] = std::log(sum0) - std::log(sum1);
  }
  return app;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

std::vector<long long> apportion(
    const std::vector<std::pair<int, double>>& profile, long long total) {
  std::vector<long long> counts(profile.size());
  std::vector<double> remainder(profile.size());
  long long used = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double exact = profile[i].second * static_cast<double>(total);
    counts[i] = static_cast<long long>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    used += counts[i];
  }
  std::vector<std::size_t> order(profile.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return profile[a].first > profile[b].first;
  });
  for (std::size_t i = 0; used < total; ++i) {
    counts[order[i % order.size()]] += 1;
    used += 1;
  }
  return counts;
}

long long mask_keep_count(const std::string& mask, long long length) {
  long long kept = 0;
  for (long long p = 0; p < length; ++p) {
    if (mask[static_cast<std::size_t>(p % static_cast<long long>(mask.size()))] == '1') {
      ++kept;
    }
  }
  return kept;
}

}  // namespace itc::oracle
