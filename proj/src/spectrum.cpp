#include <cmath>
#include <numbers>
#include <utility>

#include "spinodal/errors.hpp"
#include "spinodal/micro.hpp"

namespace spinodal {

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw DataError("FFT length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / double(len);
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const std::complex<double> w = std::polar(1.0, ang * double(k));
      for (std::size_t i = k; i < n; i += len) {
        const std::complex<double> u = a[i];
        const std::complex<double> v = a[i + half] * w;
        a[i] = u + v;
        a[i + half] = u - v;
      }
    }
  }
  if (inverse)
    for (auto& v : a) v /= double(n);
}

std::vector<std::complex<double>> fft2(const ScalarField2D& f) {
  if (!f.spec().power_of_two()) throw DataError("spectral analysis needs power-of-two grid sides");
  const int nx = f.nx(), ny = f.ny();
  std::vector<std::complex<double>> out(std::size_t(nx) * ny);
  std::vector<std::complex<double>> line(nx);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) line[i] = f(i, j);
    fft_inplace(line);
    std::copy(line.begin(), line.end(), out.begin() + std::ptrdiff_t(j) * nx);
  }
  line.resize(ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) line[j] = out[std::size_t(j) * nx + i];
    fft_inplace(line);
    for (int j = 0; j < ny; ++j) out[std::size_t(j) * nx + i] = line[j];
  }
  return out;
}

double characteristic_length(const ScalarField2D& f) {
  if (!f.spec().power_of_two()) throw DataError("spectral analysis needs power-of-two grid sides");
  const FieldStats s = field_stats(f);
  if (s.max == s.min) throw DataError("no structure: field is constant");

  ScalarField2D centered = f;
  centered.values() -= s.mean;
  const auto spec = fft2(centered);

  const int nx = f.nx(), ny = f.ny();
  const double dkx = 2.0 * std::numbers::pi / (nx * f.h());
  const double dky = 2.0 * std::numbers::pi / (ny * f.h());
  double sum_s = 0.0, sum_ks = 0.0;
  for (int j = 0; j < ny; ++j) {
    const int mj = j < ny / 2 ? j : j - ny;
    for (int i = 0; i < nx; ++i) {
      if (i == 0 && j == 0) continue;
      const int mi = i < nx / 2 ? i : i - nx;
      const double k = std::hypot(mi * dkx, mj * dky);
      const double p = std::norm(spec[std::size_t(j) * nx + i]);
      sum_s += p;
      sum_ks += k * p;
    }
  }
  if (!(sum_ks > 0.0)) throw DataError("no structure: empty spectrum");
  return 2.0 * std::numbers::pi * sum_s / sum_ks;
}

}  // namespace spinodal
