#pragma once

#include <string>

namespace rcm {

enum class LawKind { Dirac, Uniform, TwoPoint, Pareto };

/// Single-edge conductance law with support in [1, inf).
///
/// Variants: Dirac(1), Uniform(1, b) with b > 1, TwoPoint(1, kappa, p) taking
/// value kappa with probability p, and Pareto(shape s > 2, minimum 1). All
/// first and second moments are available in closed form.
class ConductanceLaw {
public:
    static ConductanceLaw dirac();
    static ConductanceLaw uniform(double b);
    static ConductanceLaw two_point(double kappa, double p);
    static ConductanceLaw pareto(double shape);

    LawKind kind() const { return kind_; }
    double mean() const;
    double second_moment() const;
    double variance() const { return second_moment() - mean() * mean(); }

    /// Inverse CDF for u in [0, 1).
    double quantile(double u) const;
    /// 0.999-quantile, used by the wraparound guard.
    double quantile999() const { return quantile(0.999); }

    bool is_deterministic() const;
    /// True for laws with finitely many values (Dirac, TwoPoint).
    bool is_discrete() const { return kind_ == LawKind::Dirac || kind_ == LawKind::TwoPoint; }

    // TwoPoint accessors (lo is always 1).
    double hi() const { return a_; }
    double prob_hi() const { return b_; }
    // Uniform upper endpoint / Pareto shape.
    double param() const { return a_; }

    std::string to_string() const;
    static ConductanceLaw parse(const std::string& text);

    friend bool operator==(const ConductanceLaw& x, const ConductanceLaw& y) {
        return x.kind_ == y.kind_ && x.a_ == y.a_ && x.b_ == y.b_;
    }

private:
    ConductanceLaw(LawKind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    LawKind kind_;
    double a_;  // Uniform b / TwoPoint kappa / Pareto shape
    double b_;  // TwoPoint p
};

}  // namespace rcm
