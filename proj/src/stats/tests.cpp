#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "avix/core/error.hpp"
#include "avix/stats/stats.hpp"

namespace avix::stats {

std::string_view to_string(TestKind t) {
  switch (t) {
    case TestKind::kWelchT: return "welch_t";
    case TestKind::kStudentT: return "student_t";
    case TestKind::kMannWhitneyU: return "mann_whitney_u";
    case TestKind::kKs2Sample: return "ks_2sample";
    case TestKind::kAd2Sample: return "ad_2sample";
  }
  return "?";
}

double mean(std::span<const double> x) {
  if (x.empty()) return std::nan("");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x) {
  if (x.size() < 2) return std::nan("");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

namespace {

double sample_var(std::span<const double> x) {
  const double s = sample_std(x);
  return s * s;
}

double normal_sf(double z) { return boost::math::cdf(boost::math::complement(boost::math::normal(), z)); }

void require_size(std::span<const double> x, std::size_t n, const char* test) {
  if (x.size() < n) {
    throw Error(ErrorCode::kDegenerateSample,
                std::string(test) + " needs at least " + std::to_string(n) + " observations per sample");
  }
}

// Midranks of the pooled sample a ++ b, doubled so they are integers.
std::vector<long> doubled_midranks(std::span<const double> a, std::span<const double> b,
                                   std::vector<std::size_t>* tie_sizes) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return pooled[l] < pooled[r]; });
  std::vector<long> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // ranks i+1 .. j+1, doubled mean = i + j + 2
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = static_cast<long>(i + j + 2);
    if (tie_sizes) tie_sizes->push_back(j - i + 1);
    i = j + 1;
  }
  return ranks;
}

// P(|S - mean| >= |observed - mean|) for the doubled rank sum S of a random
// size-k subset of `ranks`.
double exact_rank_sum_p(const std::vector<long>& ranks, std::size_t k, long observed) {
  const std::size_t n = ranks.size();
  const long total_rank = std::accumulate(ranks.begin(), ranks.end(), 0L);
  long max_sum = 0;
  {
    std::vector<long> sorted = ranks;
    std::sort(sorted.rbegin(), sorted.rend());
    for (std::size_t i = 0; i < k; ++i) max_sum += sorted[i];
  }
  // counts[j][s]: subsets of size j with doubled rank sum s
  std::vector<std::vector<double>> counts(k + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
  counts[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const long r = ranks[i];
    for (std::size_t j = std::min(k, i + 1); j >= 1; --j) {
      auto& dst = counts[j];
      const auto& src = counts[j - 1];
      for (long s = max_sum - r; s >= 0; --s) {
        if (src[static_cast<std::size_t>(s)] != 0.0) dst[static_cast<std::size_t>(s + r)] += src[static_cast<std::size_t>(s)];
      }
    }
  }
  // Compare 2 * n * |S - mean| in integers: mean = k * total_rank / n.
  const auto dev = [&](long s) {
    return std::abs(static_cast<long long>(s) * static_cast<long long>(n) -
                    static_cast<long long>(k) * total_rank);
  };
  const long long obs_dev = dev(observed);
  double extreme = 0.0;
  double total = 0.0;
  for (long s = 0; s <= max_sum; ++s) {
    const double c = counts[k][static_cast<std::size_t>(s)];
    if (c == 0.0) continue;
    total += c;
    if (dev(s) >= obs_dev) extreme += c;
  }
  return extreme / total;
}

}  // namespace

TestResult t_test(std::span<const double> a, std::span<const double> b, bool pooled) {
  require_size(a, 2, "t test");
  require_size(b, 2, "t test");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_var(a);
  const double vb = sample_var(b);

  TestResult r;
  r.test = pooled ? TestKind::kStudentT : TestKind::kWelchT;
  if (va == 0.0 && vb == 0.0) {
    if (ma != mb) throw Error(ErrorCode::kDegenerateSample, "t test: both samples constant with different means");
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.df = pooled ? na + nb - 2.0 : na + nb - 2.0;
    return r;
  }
  double se2 = 0.0;
  if (pooled) {
    const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    se2 = sp2 * (1.0 / na + 1.0 / nb);
    r.df = na + nb - 2.0;
  } else {
    const double qa = va / na;
    const double qb = vb / nb;
    se2 = qa + qb;
    r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  }
  r.statistic = (ma - mb) / std::sqrt(se2);
  const boost::math::students_t dist(r.df);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(dist, -std::abs(r.statistic)));
  return r;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, UMethod method) {
  require_size(a, 1, "Mann-Whitney U");
  require_size(b, 1, "Mann-Whitney U");
  std::vector<std::size_t> ties;
  const auto ranks = doubled_midranks(a, b, &ties);
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const long sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(na), 0L);

  TestResult r;
  r.test = TestKind::kMannWhitneyU;
  r.statistic = static_cast<double>(sum_a) / 2.0 - static_cast<double>(na * (na + 1)) / 2.0;

  const bool exact = method == UMethod::kExact || (method == UMethod::kAuto && (na <= 8 || nb <= 8));
  if (exact) {
    // Enumerate over the smaller sample; its rank-sum deviation mirrors a's.
    if (na <= nb) {
      r.p_value = exact_rank_sum_p(ranks, na, sum_a);
    } else {
      const long sum_b = std::accumulate(ranks.begin() + static_cast<long>(na), ranks.end(), 0L);
      r.p_value = exact_rank_sum_p(ranks, nb, sum_b);
    }
    return r;
  }

  const double n1 = static_cast<double>(na);
  const double n2 = static_cast<double>(nb);
  const double n = n1 + n2;
  double tie_term = 0.0;
  for (std::size_t t : ties) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double mu = n1 * n2 / 2.0;
  const double sigma = std::sqrt(n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0))));
  if (sigma == 0.0) {
    r.p_value = 1.0;
    return r;
  }
  const double z = (std::abs(r.statistic - mu) - 0.5) / sigma;
  r.p_value = std::clamp(2.0 * normal_sf(z), 0.0, 1.0);
  return r;
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    // cdf = sqrt(2 pi) / x * sum exp(-(2k-1)^2 pi^2 / (8 x^2)); converges fast for small x.
    const double w = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      sum += std::exp(-odd * odd * w);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_2sample(std::span<const double> a, std::span<const double> b) {
  require_size(a, 1, "KS test");
  require_size(b, 1, "KS test");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  TestResult r;
  r.test = TestKind::kKs2Sample;
  r.statistic = d;
  r.p_value = kolmogorov_sf(std::sqrt(na * nb / (na + nb)) * d);
  return r;
}

TestResult ad_2sample(std::span<const double> a, std::span<const double> b) {
  require_size(a, 2, "Anderson-Darling test");
  require_size(b, 2, "Anderson-Darling test");
  const std::span<const double> samples[] = {a, b};
  constexpr double k = 2.0;

  std::vector<double> z(a.begin(), a.end());
  z.insert(z.end(), b.begin(), b.end());
  std::sort(z.begin(), z.end());
  std::vector<double> zstar = z;
  zstar.erase(std::unique(zstar.begin(), zstar.end()), zstar.end());
  if (zstar.size() < 2) {
    throw Error(ErrorCode::kDegenerateSample, "Anderson-Darling test needs at least two distinct values");
  }
  const double N = static_cast<double>(z.size());

  double a2 = 0.0;
  for (const auto& s_in : samples) {
    std::vector<double> s(s_in.begin(), s_in.end());
    std::sort(s.begin(), s.end());
    const double ni = static_cast<double>(s.size());
    double inner = 0.0;
    for (double x : zstar) {
      const double left = static_cast<double>(std::lower_bound(z.begin(), z.end(), x) - z.begin());
      const double lj = static_cast<double>(std::upper_bound(z.begin(), z.end(), x) - z.begin()) - left;
      const double bj = left + lj / 2.0;
      const double right_s = static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin());
      const double fij = right_s - static_cast<double>(std::lower_bound(s.begin(), s.end(), x) - s.begin());
      const double mij = right_s - fij / 2.0;
      const double num = N * mij - bj * ni;
      inner += lj / N * num * num / (bj * (N - bj) - N * lj / 4.0);
    }
    a2 += inner / ni;
  }
  a2 *= (N - 1.0) / N;

  // Scholz-Stephens variance of the statistic.
  const double H = 1.0 / static_cast<double>(a.size()) + 1.0 / static_cast<double>(b.size());
  double h = 0.0;
  double g = 0.0;
  {
    // hs[j] = sum_{i=N-1-j}^{N-1} 1/i over j = 0 .. N-3
    double hs = 0.0;
    const long n = static_cast<long>(z.size());
    for (long j = 0; j <= n - 3; ++j) {
      hs += 1.0 / static_cast<double>(n - 1 - j);
      g += hs / static_cast<double>(j + 2);
    }
    h = hs + 1.0;
  }
  const double ca = (4 * g - 6) * (k - 1) + (10 - 6 * g) * H;
  const double cb = (2 * g - 4) * k * k + 8 * h * k + (2 * g - 14 * h - 4) * H - 8 * h + 4 * g - 6;
  const double cc = (6 * h + 2 * g - 2) * k * k + (4 * h - 4 * g + 6) * k + (2 * h - 6) * H + 4 * h;
  const double cd = (2 * h + 6) * k * k - 4 * h * k;
  const double sigmasq = (ca * N * N * N + cb * N * N + cc * N + cd) / ((N - 1.0) * (N - 2.0) * (N - 3.0));
  const double m = k - 1.0;

  TestResult r;
  r.test = TestKind::kAd2Sample;
  r.statistic = (a2 - m) / std::sqrt(sigmasq);

  static constexpr double b0[] = {0.675, 1.281, 1.645, 1.96, 2.326, 2.573, 3.085};
  static constexpr double b1[] = {-0.245, 0.25, 0.678, 1.149, 1.822, 2.364, 3.615};
  static constexpr double b2[] = {-0.105, -0.305, -0.362, -0.391, -0.396, -0.345, -0.154};
  static constexpr double sig[] = {0.25, 0.1, 0.05, 0.025, 0.01, 0.005, 0.001};
  Eigen::Matrix<double, 7, 3> vander;
  Eigen::Matrix<double, 7, 1> logsig;
  for (int i = 0; i < 7; ++i) {
    const double crit = b0[i] + b1[i] / std::sqrt(m) + b2[i] / m;
    vander(i, 0) = crit * crit;
    vander(i, 1) = crit;
    vander(i, 2) = 1.0;
    logsig(i) = std::log(sig[i]);
  }
  const double crit_min = vander(0, 1);
  const double crit_max = vander(6, 1);
  if (r.statistic < crit_min) {
    r.p_value = kAdPMax;
  } else if (r.statistic > crit_max) {
    r.p_value = kAdPMin;
  } else {
    const Eigen::Vector3d coef = vander.colPivHouseholderQr().solve(logsig);
    const double x = r.statistic;
    r.p_value = std::clamp(std::exp(coef(0) * x * x + coef(1) * x + coef(2)), kAdPMin, kAdPMax);
  }
  return r;
}

}  // namespace avix::stats
