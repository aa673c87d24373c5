#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "fragsim/csv.hpp"
#include "fragsim/experiment.hpp"

namespace fragsim {

enum class PlotKind { m_staircase, M_staircase, intensity, tau_cdf };

/// Names accepted by parse_plot_kind, in declaration order.
const std::vector<std::string_view>& plot_kind_names();
/// Throws ConfigError("kind", ...) for an unknown name.
PlotKind parse_plot_kind(std::string_view name);

/// Builds a plotting table from a simulate record.
///   m-staircase / M-staircase (gillespie): replica,t,value,lo_int,hi_int,
///     window columns NaN where t <= e.
///   intensity (brw): n,s,empirical_intensity,limit_intensity over unit-width
///     bins from the floor up, for the last generation.
///   tau-cdf (brw): n,tau,empirical_cdf,limit_cdf for every generation.
/// Throws ConfigError("kind", ...) when the kind does not fit the engine.
Table plot_table(const ExperimentSpec& spec, const Table& rows, const Table* points,
                 PlotKind kind);

/// Reads <in> and its sidecar (and points file if needed), writes <out>.
void emit_plotdata(const std::filesystem::path& in, PlotKind kind,
                   const std::filesystem::path& out);

}  // namespace fragsim
