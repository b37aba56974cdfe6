#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "avix/core/error.hpp"
#include "avix/smoothing/smoothing.hpp"

namespace avix::smoothing {

void FilterSpec::validate() const {
  if (!(sample_hz > 0.0) || !std::isfinite(sample_hz)) {
    throw Error(ErrorCode::kParameter, "sample_hz must be positive");
  }
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_hz / 2.0)) {
    throw Error(ErrorCode::kParameter, "cutoff_hz must lie in (0, sample_hz/2); got " + std::to_string(cutoff_hz));
  }
  if (order < 1) throw Error(ErrorCode::kParameter, "filter order must be >= 1");
}

namespace {

std::vector<double> poly_mul(const std::vector<double>& p, const std::array<double, 3>& q) {
  std::vector<double> out(p.size() + 2, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

std::vector<double> expand(const std::vector<SecondOrderSection>& sections, bool numerator, std::size_t order) {
  std::vector<double> poly{1.0};
  for (const auto& s : sections) poly = poly_mul(poly, numerator ? s.b : s.a);
  poly.resize(order + 1);
  return poly;
}

std::size_t degree(const std::vector<SecondOrderSection>& sections) {
  std::size_t n = 0;
  for (const auto& s : sections) n += (s.a[2] == 0.0 && s.b[2] == 0.0) ? 1 : 2;
  return n;
}

}  // namespace

std::vector<double> SosFilter::numerator() const { return expand(sections, true, degree(sections)); }
std::vector<double> SosFilter::denominator() const { return expand(sections, false, degree(sections)); }

SosFilter design_butterworth(const FilterSpec& spec) {
  spec.validate();
  using cd = std::complex<double>;
  const int n = spec.order;
  const double fs2 = 2.0 * spec.sample_hz;
  const double warped = fs2 * std::tan(std::numbers::pi * spec.cutoff_hz / spec.sample_hz);

  auto to_digital = [&](cd analog_pole) { return (fs2 + warped * analog_pole) / (fs2 - warped * analog_pole); };

  SosFilter filter;
  // Upper-half-plane prototype poles; each pairs with its conjugate.
  for (int k = 1; k <= n / 2; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + n - 1) / (2.0 * n);
    const cd z = to_digital(std::polar(1.0, theta));
    SecondOrderSection s;
    s.a = {1.0, -2.0 * z.real(), std::norm(z)};
    const double gain = (1.0 + s.a[1] + s.a[2]) / 4.0;
    s.b = {gain, 2.0 * gain, gain};
    filter.sections.push_back(s);
  }
  if (n % 2 == 1) {
    const double z = to_digital(cd(-1.0, 0.0)).real();
    SecondOrderSection s;
    s.a = {1.0, -z, 0.0};
    const double gain = (1.0 - z) / 2.0;
    s.b = {gain, gain, 0.0};
    filter.sections.push_back(s);
  }
  // Poles nearest the unit circle go last.
  std::stable_sort(filter.sections.begin(), filter.sections.end(),
                   [](const SecondOrderSection& l, const SecondOrderSection& r) {
                     const double ml = l.a[2] != 0.0 ? std::sqrt(l.a[2]) : std::abs(l.a[1]);
                     const double mr = r.a[2] != 0.0 ? std::sqrt(r.a[2]) : std::abs(r.a[1]);
                     return ml < mr;
                   });
  return filter;
}

std::complex<double> frequency_response(const SosFilter& filter, double freq_hz, double sample_hz) {
  const std::complex<double> zinv = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / sample_hz);
  std::complex<double> h = 1.0;
  for (const auto& s : filter.sections) {
    const auto num = s.b[0] + zinv * (s.b[1] + zinv * s.b[2]);
    const auto den = s.a[0] + zinv * (s.a[1] + zinv * s.a[2]);
    h *= num / den;
  }
  return h;
}

std::vector<double> filter_once(const SosFilter& filter, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  for (const auto& s : filter.sections) {
    // Unit DC gain per section: the steady state for a constant c is the same
    // level c entering every section.
    const double c = y[0];
    double z2 = (s.b[2] - s.a[2]) * c;
    double z1 = (s.b[1] - s.a[1]) * c + z2;
    for (double& sample : y) {
      const double in = sample;
      const double out = s.b[0] * in + z1;
      z1 = s.b[1] * in - s.a[1] * out + z2;
      z2 = s.b[2] * in - s.a[2] * out;
      sample = out;
    }
  }
  return y;
}

std::vector<double> filtfilt(const SosFilter& filter, std::span<const double> x, std::size_t pad) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  std::vector<double> base(x.begin(), x.end());
  if (base.size() < pad + 1) base.resize(pad + 1, x.back());
  const std::size_t m = base.size();

  std::vector<double> ext;
  ext.reserve(m + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * base.front() - base[i]);
  ext.insert(ext.end(), base.begin(), base.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * base.back() - base[m - 1 - i]);

  auto y = filter_once(filter, ext);
  std::reverse(y.begin(), y.end());
  y = filter_once(filter, y);
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::vector<double> smooth_speed(std::span<const double> v, const FilterSpec& spec) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorCode::kDomain, "speed series has a non-finite value at index " + std::to_string(i));
    }
  }
  const SosFilter filter = design_butterworth(spec);
  auto out = filtfilt(filter, v, spec.pad_length());
  for (double& s : out) s = std::max(0.0, s);
  return out;
}

}  // namespace avix::smoothing
