#pragma once

#include <optional>

#include "odt/edwards.hpp"
#include "odt/fe25519.hpp"

namespace odt {

// Elligator 2 over the Montgomery form v^2 = u^3 + A u^2 + u, A = 486662,
// with fixed non-square 2. Representatives are canonicalized into
// [0, (q-1)/2], which fits in 254 bits.

struct MontPoint {
    Fe u, v;
};

// Total map: any field element is sent to a curve point.
MontPoint elligator_map(const Fe& r);

// Inverse map; empty when the point has no representative (about half of all
// points). The returned value is the canonical representative.
std::optional<Fe> elligator_inverse(const MontPoint& p);

// Birational conversion. Small-order inputs that sit on the exceptional
// divisor of the map are sent to small-order Edwards points, which vanish
// after cofactor clearing.
Point mont_to_edwards(const MontPoint& m);
// Requires an affine point with x != 0, y != 1 (i.e. not small order).
MontPoint edwards_to_mont(const Affine& a);

}  // namespace odt
