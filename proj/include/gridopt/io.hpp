#ifndef GRIDOPT_IO_HPP
#define GRIDOPT_IO_HPP

#include <iosfwd>
#include <string>

#include "gridopt/design.hpp"
#include "gridopt/gex.hpp"

namespace gridopt {

/// CSV with header "i,x1,...,xk,weight"; full double precision.
void write_design_csv(std::ostream& os, const Design& design);
Design read_design_csv(std::istream& is);

/// Human-readable support table: i, x_i1..x_ik, weight to 6 decimals.
void write_design_table(std::ostream& os, const Design& design);

/// {"points": [[..]], "weights": [..], "criterion": phi, "m": m}
std::string design_json(const Design& design, double criterion, int m);

/// Full run report: per-round trace plus the final design and certificate.
std::string report_json(const RunReport& report, const Design& design, int m);

}  // namespace gridopt

#endif
