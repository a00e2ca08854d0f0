#include "rlab/fft.hpp"

#include <fftw3.h>

namespace rlab {

struct Fft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Fft::Fft(const PeriodicGrid& grid, int components)
    : grid_(grid), components_(components), plans_(std::make_unique<Plans>()) {
  const Index total = grid_.total_points() * components_;
  // Scratch buffers only for planning; execution uses the new-array calls.
  Vector a = Vector::Zero(total), b = Vector::Zero(total);
  int dims[3] = {grid_.n, grid_.n, grid_.n};
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->fwd = fftw_plan_many_dft(grid_.dim, dims, components_, pa, nullptr,
                                   components_, 1, pb, nullptr, components_, 1,
                                   FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_many_dft(grid_.dim, dims, components_, pa, nullptr,
                                   components_, 1, pb, nullptr, components_, 1,
                                   FFTW_BACKWARD, flags);
  if (!plans_->fwd || !plans_->bwd) throw Error("FFT planning failed");
}

Fft::~Fft() {
  if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
  if (plans_->bwd) fftw_destroy_plan(plans_->bwd);
}

void Fft::forward(const Vector& in, Vector& out) const {
  out.resize(in.size());
  fftw_execute_dft(plans_->fwd,
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void Fft::inverse(const Vector& in, Vector& out) const {
  out.resize(in.size());
  fftw_execute_dft(plans_->bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  out *= 1.0 / static_cast<double>(grid_.total_points());
}

}  // namespace rlab
