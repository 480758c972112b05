#pragma once

#include <map>
#include <vector>

#include "smf/elliptic.hpp"
#include "smf/hecke.hpp"
#include "smf/linalg.hpp"

namespace smf::harder {

// Predicted congruence lambda(p) = p^{k-2} + a(p) + p^{j+k-1} mod ell between
// an eigenvalue on S_{j,k}(Gamma_2) and an elliptic eigenform of weight r.
struct CongruenceCase {
    int j = 0, k = 0;
    int elliptic_weight = 0;
    Z ell;
    std::vector<int> primes{2, 3};

    long exp_low() const { return k - 2; }
    long exp_high() const { return j + k - 1; }
};

// The predicted cases: weights with their congruence primes and the elliptic
// weight of the partner eigenform.
inline std::map<std::pair<int, int>, CongruenceCase> congruence_table() {
    std::map<std::pair<int, int>, CongruenceCase> t;
    t[{6, 12}] = CongruenceCase{6, 12, 28, Z(823)};
    t[{10, 10}] = CongruenceCase{10, 10, 28, Z(157)};
    t[{12, 9}] = CongruenceCase{12, 9, 28, Z(4057)};
    t[{14, 8}] = CongruenceCase{14, 8, 28, Z(647)};
    t[{4, 16}] = CongruenceCase{4, 16, 34, Z(1571)};
    return t;
}

struct CongruenceResult {
    Z res;       // Res(siegel charpoly, shifted elliptic charpoly)
    bool holds;  // ell | res
};

inline void require_squarefree_charpoly(const QVec& f, const char* what) {
    QVec df(f.size() > 1 ? f.size() - 1 : 1, Q(0));
    for (size_t i = 1; i < f.size(); ++i) df[i - 1] = Q(static_cast<long>(i)) * f[i];
    if (resultant(f, df) == 0)
        throw std::runtime_error(std::string(what) + ": characteristic polynomial has repeated roots");
}

// Norm of lambda_p - (p^{k-2} + a(p) + p^{j+k-1}) over the compositum, as a
// resultant of minimal polynomials: g is the elliptic T_p charpoly with its
// variable shifted by the two prime powers.
inline CongruenceResult check_congruence(const CongruenceCase& c, int p, const QVec& siegel_charpoly,
                                         const QVec& elliptic_charpoly) {
    require_squarefree_charpoly(siegel_charpoly, "siegel");
    require_squarefree_charpoly(elliptic_charpoly, "elliptic");
    Z plow, phigh;
    Z pz(p);
    mpz_pow_ui(plow.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(c.exp_low()));
    mpz_pow_ui(phigh.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(c.exp_high()));
    QVec shifted = poly_shift_arg(elliptic_charpoly, Q(plow + phigh));
    Q r = resultant(siegel_charpoly, shifted);
    if (r.get_den() != 1) throw std::logic_error("check_congruence: non-integral resultant");
    CongruenceResult out;
    out.res = r.get_num();
    out.holds = (out.res % c.ell == 0);
    return out;
}

// Convenience: computes the elliptic side itself.
inline CongruenceResult check_congruence(const CongruenceCase& c, int p,
                                         const QVec& siegel_charpoly) {
    int dim_guess = c.elliptic_weight / 12 + 1;
    auto ell = elliptic::elliptic_hecke(c.elliptic_weight, p, p * (dim_guess + 1) + 2);
    return check_congruence(c, p, siegel_charpoly, charpoly(ell.matrix));
}

}  // namespace smf::harder
