#pragma once

#include <optional>

#include "odt/errors.hpp"
#include "odt/group.hpp"

namespace odt {

// Four-step equality test between a prover holding witness w and a verifier
// holding a guess w'. Transport-agnostic: the verifier's commitment reaches
// the prover either as a raw encoded element (which may fail to parse) or as
// a decoded nonce.

template <PrimeOrderGroup G>
struct ProverState {
    typename G::Element u;
    typename G::Scalar w;
};

template <PrimeOrderGroup G>
struct VerifierState {
    typename G::Element u;
    typename G::Scalar s;
    typename G::Scalar w_expected;
    typename G::Element v;
};

template <PrimeOrderGroup G>
struct PpetResponse {
    typename G::Element y;
    typename G::Element z;
};

// Step 1: the prover opens with a uniform group element.
template <PrimeOrderGroup G>
typename G::Element prover_init(Rng& rng) {
    return G::random_element(rng);
}

// Step 2: commitment v = g^s u^{w'}. When require_encodable is set, s is
// re-sampled until v has a uniform encoding (expected two draws); used by the
// TLS embedding, where v must hide inside a nonce.
template <PrimeOrderGroup G>
VerifierState<G> verifier_commit(const typename G::Element& u,
                                 const typename G::Scalar& w_expected, Rng& rng,
                                 bool require_encodable) {
    for (int attempt = 0; attempt < 128; attempt++) {
        typename G::Scalar s = G::random_scalar(rng);
        typename G::Element v = G::mul(G::exp(G::generator(), s), G::exp(u, w_expected));
        if (!require_encodable || G::encodable(v))
            return VerifierState<G>{u, s, w_expected, v};
    }
    throw EncodingExhausted();
}

// Step 3: y = g^t, z = v^t u^{-wt} for fresh t != 0. A commitment that does
// not parse into the group is answered with two independent uniform elements,
// which leaks nothing.
template <PrimeOrderGroup G>
PpetResponse<G> prover_respond(const typename G::Element& u,
                               const std::optional<typename G::Element>& v_raw,
                               const typename G::Scalar& w, Rng& rng) {
    if (!v_raw) {
        return PpetResponse<G>{G::random_element(rng), G::random_element(rng)};
    }
    typename G::Scalar t = G::random_nonzero_scalar(rng);
    typename G::Element y = G::exp(G::generator(), t);
    typename G::Element z = G::mul(G::exp(*v_raw, t), G::exp(u, (w * t).neg()));
    return PpetResponse<G>{y, z};
}

// Step 4: w == w' iff z == y^s.
template <PrimeOrderGroup G>
bool verifier_check(const PpetResponse<G>& resp, const VerifierState<G>& st) {
    return G::eq(resp.z, G::exp(resp.y, st.s));
}

}  // namespace odt
