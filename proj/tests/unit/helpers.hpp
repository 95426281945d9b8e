#pragma once

#include <cstdint>

#include "ttess/models.hpp"
#include "ttess/sampler.hpp"

namespace testing_util {

/// A CRTT state reached after n steps from the empty unit square.
inline ttess::TTessellation random_state(std::uint64_t seed, std::uint64_t n = 2000, double tau = 1.9,
                                         ttess::Polygon domain = ttess::unit_square()) {
    ttess::Chain chain(ttess::TTessellation::empty(std::move(domain)), std::make_shared<ttess::CrttModel>(tau),
                       {}, seed);
    chain.run(n);
    return chain.tessellation();
}

inline ttess::Line horizontal(double y) { return {0.0, y}; }
inline ttess::Line vertical(double x) { return {ttess::kPi / 2.0, -x}; }

}  // namespace testing_util
