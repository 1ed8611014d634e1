#include "fx/cocomo.hpp"

#include <cmath>

#include "fx/errors.hpp"

namespace fx {

CocomoParams CocomoParams::for_class(ProjectClass c) {
    switch (c) {
        case ProjectClass::Organic:
            return {2.4, 1.05, 2.5, 0.38};
        case ProjectClass::Semidetached:
            return {3.0, 1.12, 2.5, 0.35};
        case ProjectClass::Embedded:
            return {3.6, 1.20, 2.5, 0.32};
    }
    throw ConfigError("unknown project class");
}

double project_cost(double tdev_months, double monthly_rate) {
    return std::ceil(tdev_months) * monthly_rate;
}

CocomoEstimate estimate(double kloc, const CocomoParams& params,
                        std::optional<double> monthly_rate) {
    if (!(kloc > 0.0)) throw ConfigError("kloc must be positive");
    if (!(params.effort_coeff > 0.0 && params.effort_exp > 0.0 &&
          params.schedule_coeff > 0.0 && params.schedule_exp > 0.0))
        throw ConfigError("heuristic constants must be positive");
    if (monthly_rate && !(*monthly_rate > 0.0))
        throw ConfigError("monthly rate must be positive");

    CocomoEstimate est;
    est.effort_pm = params.effort_coeff * std::pow(kloc, params.effort_exp);
    est.tdev_months = params.schedule_coeff * std::pow(est.effort_pm, params.schedule_exp);
    est.productivity_loc_pm = 1000.0 * kloc / est.effort_pm;
    est.avg_staff = est.effort_pm / est.tdev_months;
    est.billed_months = std::ceil(est.tdev_months);
    if (monthly_rate) est.cost = project_cost(est.tdev_months, *monthly_rate);
    return est;
}

}  // namespace fx
