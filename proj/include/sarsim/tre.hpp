#pragma once

#include <cstdint>
#include <vector>

#include "sarsim/raster.hpp"

namespace sarsim {

enum class Conduction { Exponential, Rational };
enum class PerturbScope { Global, Omega };

struct TREParams {
  // Diffusion. kappa is stated on the 0-255 intensity scale; kappa_scale
  // converts it to the working data range (1/255 for unit-range pixels).
  double kappa = 15.0;
  double kappa_scale = 1.0 / 255.0;
  int diffusion_iterations = 20;
  double diffusion_lambda = 0.25;  // explicit-scheme stability bound
  int band_width = 5;
  Conduction conduction = Conduction::Exponential;

  // Perturbations.
  int looks = 4;
  double drift_alpha = 0.05;
  int drift_box = 51;  // odd box-filter side
  int ring_width = 5;
  bool enable_speckle = true;
  bool enable_drift = true;
  PerturbScope perturb_scope = PerturbScope::Global;

  void validate() const;
};

/// Zero-mean, unit-variance smoothed Gaussian random field.
struct DriftField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<size_t>(y) * width + x];
  }
};

/// Replaces pixels in omega by the ring's quantile function evaluated at
/// their empirical CDF rank (mid-rank ties, linear interpolation between
/// order statistics). Monotone in the pixel value; pixels outside omega are
/// untouched.
IntensityRaster histogram_match(const IntensityRaster& image,
                                const BinaryMask& omega,
                                const BinaryMask& ring);

/// Explicit Perona-Malik diffusion restricted to `domain` with no-flux
/// treatment of the domain boundary; the intensity sum over the domain is
/// conserved. `params.kappa` is used verbatim (no kappa_scale applied here).
IntensityRaster anisotropic_diffusion(const IntensityRaster& image,
                                      const BinaryMask& domain,
                                      const TREParams& params);

/// I.i.d. per-pixel Gamma(L, 1/L) draws (mean 1, variance 1/L).
IntensityRaster sample_speckle(int width, int height, int looks,
                               std::uint64_t rng_seed);

/// I.i.d. standard normal field, box-filtered (reflect edges), then
/// re-standardized to zero mean and unit variance.
DriftField sample_drift(int width, int height, const TREParams& params,
                        std::uint64_t rng_seed);

/// Per-pixel i_eq * eta * (1 + alpha * G), clamped below at 0.
IntensityRaster compose_pre_event(const IntensityRaster& i_eq,
                                  const IntensityRaster& speckle,
                                  const DriftField& drift, double alpha);

/// Full enhancement stage: histogram matching of omega against its exterior
/// ring, band-constrained diffusion, then speckle/drift composition.
IntensityRaster tre_apply(const IntensityRaster& inpainted,
                          const BinaryMask& omega, const TREParams& params,
                          std::uint64_t rng_seed);

/// Quantile of a sorted sample with probability nodes (j+0.5)/n and linear
/// interpolation between order statistics (clamped at the extremes).
double sample_quantile(const std::vector<double>& sorted, double q);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

}  // namespace sarsim
