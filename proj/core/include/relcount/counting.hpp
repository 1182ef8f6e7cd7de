#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relcount/fuchsian.hpp"
#include "relcount/special_functions.hpp"
#include "relcount/test_functions.hpp"

namespace relcount {

// Eigenvalue parameter and period of one Maass form.
struct SpectralDatum {
  cplx s;
  double period;
};

// Lines `s_real,s_imag,period`; `#` comments and blank lines skipped.
std::vector<SpectralDatum> parse_spectral_text(const std::string& text,
                                               const std::string& source = "<text>");
std::vector<SpectralDatum> parse_spectral_file(const std::string& path);

// s = 1 with period len / (sqrt(vol) nu). Needs the volume.
std::vector<SpectralDatum> constant_spectrum(const GroupPresentation& pres);
// Checks s = 1 is present and, when the volume is known, that its period is
// len / (sqrt(vol) nu) to 1e-6.
void validate_spectrum(const std::vector<SpectralDatum>& spectral, const GroupPresentation& pres);

// int f(1/cos^2 v(g iy)) dy/y for f given as f(x^2 + 1).
double line_integral(const TestFunction& f, const MoebiusElement& g);

struct GeometricSide {
  double total = 0.0;
  double identity_term = 0.0;
  double regular_sum = 0.0;
  double exceptional_sum = 0.0;
  std::size_t regular_terms = 0;
  std::size_t exceptional_terms = 0;
};

enum class KernelRoute { kClosed, kLineIntegral };

// f(1) len + sum over exceptional q~(B) + sum over regular q(B).
// Needs a stable inventory covering B < X + Y.
GeometricSide geometric_side(const GroupPresentation& pres, const SmoothedIndicator& ind,
                             const Inventory& inv, KernelRoute route = KernelRoute::kClosed);

// sum over 1/2 < s_j <= 1 of (2/pi) gamma1(s_j) |u_j|^2 X^{s_j}.
double main_term(const std::vector<SpectralDatum>& spectral, double X);

struct CountReport {
  double X = 0.0;
  std::int64_t n_count = 0;
  double main_term = 0.0;
  double error = 0.0;
  std::size_t identity_count = 0;
  std::size_t regular_count = 0;
  std::size_t exceptional_count = 0;
  std::size_t diagonal_rejects = 0;
  std::size_t torsion_suspected = 0;
  int word_depth = 0;
  bool stable = false;
  // Main term in the normalisation twice as large.
  double main_term_alt = 0.0;
};

// N counts cosets with B < X strictly.
CountReport count_from_inventory(const Inventory& inv, const std::vector<SpectralDatum>& spectral,
                                 double X);

struct CountOptions {
  int max_word_len = 14;
  bool allow_unstable = false;
  InventoryOptions inventory;
};

// Throws Unstable when the inventory is unstable and allow_unstable is off.
CountReport count(const GroupPresentation& pres, const std::vector<SpectralDatum>& spectral,
                  double X, const CountOptions& opt = {});
CountReport count_between(const GroupPresentation& pres1, const GroupPresentation& pres2,
                          const MoebiusElement& tau, const std::vector<SpectralDatum>& spectral,
                          double X, const CountOptions& opt = {});

struct SpectralSide {
  double value = 0.0;       // sum of 2 d_t(f) |u_j|^2 over supplied data
  double tail_bound = 0.0;  // bound for |t_j| >= cutoff
  std::size_t terms = 0;
};

// C X^{1/2} sum_{n >= n0} 2^{-n/2} min(2^n, X/Y), n0 = ceil(log2 T).
double dyadic_tail_bound(double X, double Y, double cutoff_T, double period_sum_constant);

SpectralSide spectral_side_partial(const std::vector<SpectralDatum>& spectral,
                                   const SmoothedIndicator& ind, double cutoff_T,
                                   double period_sum_constant);

struct MomentScanOptions {
  double delta = 0.0;  // 0 means X / R
  bool poisson = false;
  std::uint64_t seed = 0;
};

struct MomentScan {
  double X = 0.0;
  int R = 0;
  double delta = 0.0;
  std::vector<double> points;
  std::vector<CountReport> reports;
  double mean_square = 0.0;  // (1/R) sum E^2
  double normalized = 0.0;   // mean_square / (X log^2 X)
};

// Sample points in [X, 2X] with pairwise gaps > delta, moved off inventory B-values.
std::vector<double> moment_grid(double X, int R, const MomentScanOptions& opt,
                                const std::vector<double>& avoid = {});

MomentScan moment_scan(const Inventory& inv, const std::vector<SpectralDatum>& spectral, double X,
                       int R, const MomentScanOptions& opt = {});
MomentScan moment_scan(const GroupPresentation& pres, const std::vector<SpectralDatum>& spectral,
                       double X, int R, const MomentScanOptions& opt = {},
                       const CountOptions& count_opt = {});

}  // namespace relcount
