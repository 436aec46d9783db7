#pragma once

#include "nonlocal/assembly.hpp"
#include "nonlocal/mesh.hpp"

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace nonlocal {

struct ErrorRecord {
    double param = 0.0;  ///< h or lambda
    double l2_error = 0.0;
    std::optional<double> energy_error;
    std::optional<double> rate_l2;
    std::optional<double> rate_energy;
};

/// L2(Omega) distance between a finite element function and a reference, npts-point
/// Gauss on every interior element.
double l2_error_omega(const FEFunction& uh, const std::function<double(double)>& u_ref, int npts = 7);

/// Exact L2(Omega) distance between two finite element functions on possibly different
/// meshes (integrated over the merged node set).
double l2_difference(const FEFunction& a, const FEFunction& b);

/// sqrt(e^T A e) over the free dofs of the system.
double energy_error(const FEFunction& e, const NonlocalSystem& system);

/// rate_k = log(e_{k-1} / e_k) / |log(param_{k-1} / param_k)|; one entry per consecutive pair.
std::vector<double> observed_rate(std::span<const std::pair<double, double>> errors);

/// Fills rate_l2 (and rate_energy where both neighbours carry an energy error).
void attach_rates(std::vector<ErrorRecord>& records);

} // namespace nonlocal
