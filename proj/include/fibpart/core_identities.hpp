#pragma once

// Bounded checks of the floor-function identities that the partition and
// mex-matrix results are built on.

#include "fibpart/report.hpp"
#include "fibpart/wythoff.hpp"

#include <stdexcept>

namespace fibpart {

namespace detail {

inline Int wa(Int n) { return floor_phi_mul(n); }
inline Int wb(Int n) { return floor_phi_mul(n) + n; }
// floor((phi - 1) * x)
inline Int floor_phi_inv(Int x) { return eval_affine_golden(1, -1, 0, x); }
// m(j) = floor(phi*j) - j + 1
inline Int m_of(Int j) { return wa(j) - j + 1; }

}  // namespace detail

/// Checks each listed identity for every argument in 1..N.
inline IdentityReport verify_core_identities(Int N) {
    using namespace detail;
    if (N < 1) throw std::invalid_argument("verify_core_identities needs N >= 1");
    IdentityReport r;
    r.checked_range = N;
    for (Int n = 1; n <= N; ++n) {
        const Int a = wa(n);
        const Int b = wb(n);
        r.check(wa(a) == a + n - 1, "a(a(n)) = a(n) + n - 1", n);
        r.check(wa(b) == 2 * a + n, "a(b(n)) = 2a(n) + n", n);
        // floor(n*phi^2) straight from (3n + sqrt(5n^2)) / 2
        r.check((3 * n + isqrt(5 * n * n)) / 2 == a + n, "b(n) = a(n) + n", n);

        r.check(floor_phi_inv(b) == a, "floor(b(n)/phi) = a(n)", n);
        r.check(wa(a + n) - a - n == a, "a(a(n)+n) - a(n) - n = a(n)", n);
        r.check(floor_phi_inv(b + 1) == a, "floor((b(n)+1)/phi) = a(n)", n);

        r.check(wa(a) + 1 - a == n, "floor(phi*floor(phi*k)) + 1 - floor(phi*k) = k", n);
        r.check(floor_phi_inv(b) - b == -n, "floor((phi-1)*b(k)) - b(k) = -k", n);

        // j = n + 1, so j - 1 = n
        const Int j = n + 1;
        if (in_lower_wythoff(n)) {
            r.check(m_of(j) == m_of(n) + 1 && wa(j) == a + 2, "j-1 in A: m(j) = m(j-1) + 1", j);
        } else {
            r.check(m_of(j) == m_of(n) && m_of(n) == floor_phi_inv(n) + 1 && wa(j) == a + 1,
                    "j-1 in B: m(j) = m(j-1)", j);
        }

        // f = b, g = b - 1, h = 2a + n
        const auto f = [](Int x) { return wb(x); };
        const auto g = [](Int x) { return wb(x) - 1; };
        const auto h = [](Int x) { return 2 * wa(x) + x; };
        r.check(m_of(f(a)) == b, "m(f(a(k))) = b(k)", n);
        r.check(m_of(f(b)) + 1 == wb(a + 1), "m(f(b(k))) + 1 = b(a(k)+1)", n);
        r.check(m_of(g(a)) + 1 == b, "m(g(a(k))) + 1 = b(k)", n);
        r.check(m_of(g(b)) + 2 == wb(a + 1), "m(g(b(k))) + 2 = b(a(k)+1)", n);
        r.check(m_of(h(a)) + 3 == wb(a + 1), "m(h(a(k))) + 3 = b(a(k)+1)", n);
        r.check(m_of(h(b)) + 2 == wb(b + 1), "m(h(b(k))) + 2 = b(b(k)+1)", n);
    }
    return r;
}

}  // namespace fibpart
