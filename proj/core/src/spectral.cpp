#include "nlch/spectral.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace nlch {

namespace {

// FFTW planning is not thread safe; every planner call goes through here.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Fft::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  Plans(const Grid& grid) {
    std::array<int, 3> dims{grid.n_per_axis(), grid.n_per_axis(), grid.n_per_axis()};
    AlignedVector<double> real(grid.size());
    AlignedVector<Complex> spec(grid.spectral_size());
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE;
    r2c = fftw_plan_dft_r2c(grid.dim(), dims.data(), real.data(), c, flags);
    c2r = fftw_plan_dft_c2r(grid.dim(), dims.data(), c, real.data(), flags);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

Fft::Fft(const Grid& grid) {
  // Take the mutex first so it outlives the cache at static destruction.
  auto& mtx = planner_mutex();
  static std::map<std::pair<int, int>, std::shared_ptr<const Plans>> cache;
  std::lock_guard lock(mtx);
  auto& slot = cache[{grid.dim(), grid.n_per_axis()}];
  if (!slot) slot = std::make_shared<const Plans>(grid);
  plans_ = slot;
}

void Fft::forward(const double* in, Complex* out) const {
  // The new-array execute interface does not write to `in` for r2c.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void Fft::backward_destructive(Complex* in, double* out) const {
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(in), out);
}

Spectrum::Spectrum(const Grid& grid) : grid_(grid), coeffs_(grid.spectral_size()) {}

std::shared_ptr<const WaveTable> wave_table(const Grid& grid) {
  static std::mutex m;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const WaveTable>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[{grid.dim(), grid.n_per_axis(), grid.edge_length()}];
  if (slot) return slot;

  const int n = grid.n_per_axis();
  const int dim = grid.dim();
  const int half = n / 2 + 1;
  const double dk = 2.0 * std::numbers::pi / grid.edge_length();
  auto table = std::make_shared<WaveTable>();
  const std::size_t count = grid.spectral_size();
  table->k2.resize(count);
  table->weight.resize(count);
  table->deriv.assign(dim, std::vector<double>(count));

  for (std::size_t s = 0; s < count; ++s) {
    std::size_t rest = s;
    std::array<int, 3> idx{0, 0, 0};
    idx[dim - 1] = static_cast<int>(rest % half);
    rest /= half;
    for (int a = dim - 2; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    double k2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const int wrapped = idx[a] < n / 2 ? idx[a] : idx[a] - n;
      const double k = wrapped * dk;
      k2 += k * k;
      table->deriv[a][s] = (idx[a] == n / 2) ? 0.0 : k;
    }
    table->k2[s] = k2;
    const int last = idx[dim - 1];
    table->weight[s] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
  }
  slot = table;
  return slot;
}

Spectrum forward(const Field& f) {
  Spectrum s(f.grid());
  Fft(f.grid()).forward(f.data(), s.coeffs().data());
  return s;
}

Field inverse(const Spectrum& s) {
  const Grid& g = s.grid();
  AlignedVector<Complex> scratch(s.coeffs().begin(), s.coeffs().end());
  Field out(g);
  Fft(g).backward_destructive(scratch.data(), out.data());
  out *= 1.0 / static_cast<double>(g.size());
  return out;
}

std::vector<Field> gradient(const Field& f) {
  const Grid& g = f.grid();
  const auto waves = wave_table(g);
  const Spectrum fh = forward(f);
  std::vector<Field> out;
  out.reserve(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    Spectrum d(g);
    for (std::size_t s = 0; s < g.spectral_size(); ++s) {
      d[s] = Complex(0.0, waves->deriv[a][s]) * fh[s];
    }
    out.push_back(inverse(d));
  }
  return out;
}

double h1_seminorm_sq(const Field& f) {
  double sum = 0.0;
  for (const Field& component : gradient(f)) {
    const double n = lp_norm(component, 2.0);
    sum += n * n;
  }
  return sum;
}

namespace {

double weighted_parseval(const Field& f, bool derivative) {
  const Grid& g = f.grid();
  const auto waves = wave_table(g);
  const Spectrum fh = forward(f);
  double sum = 0.0;
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    double factor = 1.0;
    if (derivative) {
      factor = 0.0;
      for (int a = 0; a < g.dim(); ++a) factor += waves->deriv[a][s] * waves->deriv[a][s];
    }
    sum += waves->weight[s] * factor * std::norm(fh[s]);
  }
  return sum * g.cell_volume() / static_cast<double>(g.size());
}

}  // namespace

double h1_seminorm_sq_spectral(const Field& f) { return weighted_parseval(f, true); }

double l2_norm_sq_spectral(const Field& f) { return weighted_parseval(f, false); }

double dual_norm(const Field& f) {
  const Grid& g = f.grid();
  const auto waves = wave_table(g);
  const Spectrum fh = forward(f);
  double sum = 0.0;
  for (std::size_t s = 1; s < g.spectral_size(); ++s) {
    sum += waves->weight[s] * std::norm(fh[s]) / waves->k2[s];
  }
  return std::sqrt(sum * g.cell_volume() / static_cast<double>(g.size()));
}

Field laplacian(const Field& f) {
  const auto waves = wave_table(f.grid());
  Spectrum fh = forward(f);
  for (std::size_t s = 0; s < fh.coeffs().size(); ++s) fh[s] *= -waves->k2[s];
  return inverse(fh);
}

}  // namespace nlch
