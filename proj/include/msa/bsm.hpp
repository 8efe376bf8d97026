#pragma once

#include <cstdint>

#include "msa/types.hpp"

namespace msa {

// One BSM per lidar Car, carrying the emitting object's id; Person/Unknown
// objects emit nothing. Output order follows the lidar car order. Positions
// are the lidar positions plus isotropic Gaussian noise of the given sigma,
// deterministic under seed; sigma 0 copies positions bitwise.
ModalityView synthesize_bsms(const ModalityView& lidar, double noise_sigma, std::uint64_t seed);

}  // namespace msa
