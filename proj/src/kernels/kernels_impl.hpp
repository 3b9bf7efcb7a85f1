#pragma once

namespace rns::kernels {

inline double combine_lanes(const double (&acc)[4]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

}  // namespace rns::kernels
