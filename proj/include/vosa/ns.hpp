#pragma once

#include "vosa/vosa.hpp"

#include <compare>

namespace vosa {

struct NSParams {
    Rational c, h;
};

// PBW monomial L(-n1)..L(-nk) G(-r1)..G(-rl) acting on the highest weight
// vector: L weakly decreasing positive integers, G strictly decreasing
// positive half-odd integers (stored doubled).
struct NSMonomial {
    std::vector<long> L;
    std::vector<long> G2;

    long weight2() const {
        long w = 0;
        for (long l : L) w += 2 * l;
        for (long g : G2) w += g;
        return w;
    }
    bool empty() const { return L.empty() && G2.empty(); }
    std::string str() const;
    friend auto operator<=>(const NSMonomial&, const NSMonomial&) = default;
};

using NSState = std::map<NSMonomial, Rational>;

// Normal-ordering engine for one (c, h); memoizes single-mode applications.
class NSContext {
  public:
    explicit NSContext(NSParams p) : p_(std::move(p)) {}

    // kind 0: L(m2/2) (m2 even), kind 1: G(m2/2) (m2 odd)
    const NSState& apply_to_mono(int kind, long m2, const NSMonomial& mono);
    NSState apply(int kind, long m2, const NSState& st);

    const NSParams& params() const { return p_; }

  private:
    NSParams p_;
    std::map<std::tuple<int, long, NSMonomial>, NSState> memo_;
};

// canonical ordered basis of the weight-w2/2 piece of the Verma module
const std::vector<NSMonomial>& verma_basis(long w2);

Mat shapovalov_gram(const NSParams& p, long w2);
Mat shapovalov_gram(NSContext& ctx, long w2);

std::map<long, int> simple_quotient_dims(const NSParams& p, long cutoff2);

struct DiscreteSeriesPoint {
    long m, r, s;
    Rational c, h;
};
// admissible (r, s) for given m, duplicates by h merged (first provenance kept)
std::vector<DiscreteSeriesPoint> discrete_series(long m);

struct UnitarityReport {
    bool consistent = true; // all weights PSD
    std::vector<std::pair<long, PsdVerdict>> verdicts; // per twice-weight
};
UnitarityReport unitarity_check(const NSParams& p, long cutoff2);

// The vacuum module L(c,0) with generators omega = L(-2)1, tau = G(-3/2)1,
// realized as the Gram-rank quotient of the Verma module.
TruncatedVOSA build_ns_vosa(const Rational& c, long cutoff2);

} // namespace vosa
