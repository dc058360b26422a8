#include "rcm/law.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rcm {

ConductanceLaw ConductanceLaw::dirac() { return {LawKind::Dirac, 1.0, 0.0}; }

ConductanceLaw ConductanceLaw::uniform(double b) {
    if (!(b > 1.0)) throw std::invalid_argument("uniform law requires b > 1");
    return {LawKind::Uniform, b, 0.0};
}

ConductanceLaw ConductanceLaw::two_point(double kappa, double p) {
    if (!(kappa >= 1.0)) throw std::invalid_argument("two-point law requires kappa >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("two-point law requires p in (0,1)");
    return {LawKind::TwoPoint, kappa, p};
}

ConductanceLaw ConductanceLaw::pareto(double shape) {
    if (!(shape > 2.0))
        throw std::invalid_argument("pareto law requires shape > 2 (finite second moment)");
    return {LawKind::Pareto, shape, 0.0};
}

double ConductanceLaw::mean() const {
    switch (kind_) {
        case LawKind::Dirac: return 1.0;
        case LawKind::Uniform: return (1.0 + a_) / 2.0;
        case LawKind::TwoPoint: return 1.0 + (a_ - 1.0) * b_;
        case LawKind::Pareto: return a_ / (a_ - 1.0);
    }
    return 1.0;
}

double ConductanceLaw::second_moment() const {
    switch (kind_) {
        case LawKind::Dirac: return 1.0;
        case LawKind::Uniform: return (a_ * a_ + a_ + 1.0) / 3.0;
        case LawKind::TwoPoint: return (1.0 - b_) + a_ * a_ * b_;
        case LawKind::Pareto: return a_ / (a_ - 2.0);
    }
    return 1.0;
}

double ConductanceLaw::quantile(double u) const {
    switch (kind_) {
        case LawKind::Dirac: return 1.0;
        case LawKind::Uniform: return 1.0 + (a_ - 1.0) * u;
        case LawKind::TwoPoint: return u < b_ ? a_ : 1.0;
        case LawKind::Pareto: return std::pow(1.0 - u, -1.0 / a_);
    }
    return 1.0;
}

bool ConductanceLaw::is_deterministic() const {
    return kind_ == LawKind::Dirac || (kind_ == LawKind::TwoPoint && a_ == 1.0);
}

std::string ConductanceLaw::to_string() const {
    std::ostringstream os;
    switch (kind_) {
        case LawKind::Dirac: os << "dirac"; break;
        case LawKind::Uniform: os << "uniform:" << a_; break;
        case LawKind::TwoPoint: os << "twopoint:" << a_ << ":" << b_; break;
        case LawKind::Pareto: os << "pareto:" << a_; break;
    }
    return os.str();
}

ConductanceLaw ConductanceLaw::parse(const std::string& text) {
    std::istringstream is(text);
    std::string name;
    std::getline(is, name, ':');
    auto next_num = [&]() {
        std::string tok;
        if (!std::getline(is, tok, ':'))
            throw std::invalid_argument("law '" + text + "': missing parameter");
        return std::stod(tok);
    };
    if (name == "dirac") return dirac();
    if (name == "uniform") return uniform(next_num());
    if (name == "twopoint") {
        double kappa = next_num();
        double p = next_num();
        return two_point(kappa, p);
    }
    if (name == "pareto") return pareto(next_num());
    throw std::invalid_argument("unknown conductance law '" + text + "'");
}

}  // namespace rcm
