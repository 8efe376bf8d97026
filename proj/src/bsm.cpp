#include "msa/bsm.hpp"

#include <cmath>

#include "msa/rng.hpp"

namespace msa {

ModalityView synthesize_bsms(const ModalityView& lidar, double noise_sigma, std::uint64_t seed) {
  if (lidar.modality != Modality::Lidar)
    throw MsaError("synthesize_bsms", "input view must be a lidar view, got " +
                                          std::string(to_string(lidar.modality)));
  if (lidar.dimension != 3)
    throw MsaError("synthesize_bsms",
                   "lidar view must be 3-dimensional, got " + std::to_string(lidar.dimension));
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw MsaError("synthesize_bsms", "noise_sigma must be a non-negative finite real");

  Rng rng(seed);
  ModalityView bsm;
  bsm.modality = Modality::Bsm;
  bsm.dimension = 3;
  for (const DetectedObject& obj : lidar.objects) {
    if (obj.cls != ObjectClass::Car) continue;
    DetectedObject rec;
    rec.id = obj.id;
    rec.cls = ObjectClass::Car;
    rec.coords = obj.coords;
    if (noise_sigma > 0.0)
      for (int a = 0; a < 3; ++a) rec.coords[a] += rng.normal(0.0, noise_sigma);
    bsm.objects.push_back(std::move(rec));
  }
  return bsm;
}

}  // namespace msa
