#include "odt/edwards.hpp"

namespace odt {

namespace {

// d = -121665/121666
const Fe& d_const() {
    static const Fe d = fe_mul(fe_neg(Fe::from_u64(121665)), fe_invert(Fe::from_u64(121666)));
    return d;
}

const Fe& d2_const() {
    static const Fe d2 = fe_add(d_const(), d_const());
    return d2;
}

}  // namespace

const Fe& edwards_d() { return d_const(); }

const Point& Point::identity() {
    static const Point id{Fe::zero(), Fe::one(), Fe::one(), Fe::zero()};
    return id;
}

const Point& Point::base() {
    static const Point b = [] {
        // y = 4/5, x = even root
        Fe y = fe_mul(Fe::from_u64(4), fe_invert(Fe::from_u64(5)));
        Fe y2 = fe_sq(y);
        Fe num = fe_sub(y2, Fe::one());
        Fe den = fe_add(fe_mul(d_const(), y2), Fe::one());
        Fe x;
        bool ok = fe_sqrt(x, fe_mul(num, fe_invert(den)));
        if (!ok) std::abort();
        Point p{x, y, Fe::one(), fe_mul(x, y)};
        return p;
    }();
    return b;
}

Point point_add(const Point& p, const Point& q) {
    Fe a = fe_mul(fe_sub(p.Y, p.X), fe_sub(q.Y, q.X));
    Fe b = fe_mul(fe_add(p.Y, p.X), fe_add(q.Y, q.X));
    Fe c = fe_mul(fe_mul(p.T, d2_const()), q.T);
    Fe d = fe_mul(fe_add(p.Z, p.Z), q.Z);
    Fe e = fe_sub(b, a);
    Fe f = fe_sub(d, c);
    Fe g = fe_add(d, c);
    Fe h = fe_add(b, a);
    return Point{fe_mul(e, f), fe_mul(g, h), fe_mul(f, g), fe_mul(e, h)};
}

Point point_dbl(const Point& p) {
    Fe a = fe_sq(p.X);
    Fe b = fe_sq(p.Y);
    Fe c = fe_add(fe_sq(p.Z), fe_sq(p.Z));
    Fe e = fe_sub(fe_sub(fe_sq(fe_add(p.X, p.Y)), a), b);
    Fe g = fe_sub(b, a);         // aA + B with a = -1
    Fe f = fe_sub(g, c);
    Fe h = fe_neg(fe_add(a, b));
    return Point{fe_mul(e, f), fe_mul(g, h), fe_mul(f, g), fe_mul(e, h)};
}

Point point_neg(const Point& p) {
    return Point{fe_neg(p.X), p.Y, p.Z, fe_neg(p.T)};
}

Point scalar_mult_bits(const Point& p, const uint8_t le_bytes[32]) {
    // 4-bit windows, most significant first.
    Point table[16];
    table[0] = Point::identity();
    table[1] = p;
    for (int i = 2; i < 16; i++) table[i] = point_add(table[i - 1], p);

    Point r = Point::identity();
    bool started = false;
    for (int byte = 31; byte >= 0; byte--) {
        for (int half = 1; half >= 0; half--) {
            uint8_t nib = (le_bytes[byte] >> (4 * half)) & 0xf;
            if (started) {
                r = point_dbl(point_dbl(point_dbl(point_dbl(r))));
            }
            if (nib != 0) {
                r = started ? point_add(r, table[nib]) : table[nib];
                started = true;
            }
        }
    }
    return r;
}

Point scalar_mult(const Point& p, const Scalar& k) {
    Bytes32 b = k.to_bytes();
    return scalar_mult_bits(p, b.data());
}

Point mul_by_cofactor(const Point& p) {
    return point_dbl(point_dbl(point_dbl(p)));
}

bool point_eq(const Point& p, const Point& q) {
    // (X1 Z2 == X2 Z1) and (Y1 Z2 == Y2 Z1)
    return fe_eq(fe_mul(p.X, q.Z), fe_mul(q.X, p.Z)) &&
           fe_eq(fe_mul(p.Y, q.Z), fe_mul(q.Y, p.Z));
}

bool point_is_identity(const Point& p) {
    return fe_is_zero(p.X) && fe_eq(p.Y, p.Z);
}

Bytes32 point_compress(const Point& p) {
    Fe zinv = fe_invert(p.Z);
    Fe x = fe_mul(p.X, zinv);
    Fe y = fe_mul(p.Y, zinv);
    Bytes32 out = fe_tobytes(y);
    if (fe_is_odd(x)) out[31] |= 0x80;
    return out;
}

std::optional<Point> point_decompress(const uint8_t b[32]) {
    uint8_t sign = b[31] >> 7;
    uint8_t yb[32];
    std::memcpy(yb, b, 32);
    yb[31] &= 0x7f;
    Fe y;
    if (!fe_frombytes_strict(y, yb)) return std::nullopt;

    Fe y2 = fe_sq(y);
    Fe num = fe_sub(y2, Fe::one());
    Fe den = fe_add(fe_mul(d_const(), y2), Fe::one());
    Fe x2 = fe_mul(num, fe_invert(den));
    Fe x;
    if (!fe_sqrt(x, x2)) return std::nullopt;
    if (fe_is_zero(x)) {
        if (sign) return std::nullopt;
    } else if (fe_is_odd(x) != static_cast<bool>(sign)) {
        x = fe_neg(x);
    }
    return Point{x, y, Fe::one(), fe_mul(x, y)};
}

Affine point_to_affine(const Point& p) {
    Fe zinv = fe_invert(p.Z);
    return Affine{fe_mul(p.X, zinv), fe_mul(p.Y, zinv)};
}

Point point_from_affine(const Affine& a) {
    return Point{a.x, a.y, Fe::one(), fe_mul(a.x, a.y)};
}

}  // namespace odt
