#pragma once

#include <optional>

namespace fx {

enum class ProjectClass { Organic, Semidetached, Embedded };

// Basic-model heuristic constants: effort = a * KLOC^A person-months,
// development time = b * effort^B months.
struct CocomoParams {
    double effort_coeff = 3.6;    // a
    double effort_exp = 1.20;     // A
    double schedule_coeff = 2.5;  // b
    double schedule_exp = 0.32;   // B

    static CocomoParams for_class(ProjectClass c);
};

struct CocomoEstimate {
    double effort_pm = 0.0;             // person-months
    double tdev_months = 0.0;
    double productivity_loc_pm = 0.0;   // 1000 * KLOC / effort
    double avg_staff = 0.0;             // effort / tdev
    double billed_months = 0.0;         // ceil(tdev), the unit costs are charged in
    std::optional<double> cost;         // billed_months * monthly_rate
};

// Throws ConfigError on non-positive kloc or constants.
CocomoEstimate estimate(double kloc, const CocomoParams& params,
                        std::optional<double> monthly_rate = {});

// Whole months are billed: ceil(tdev) * rate.
double project_cost(double tdev_months, double monthly_rate);

}  // namespace fx
