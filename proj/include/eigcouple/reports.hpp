#pragma once

// Serialized reports. JSON is returned as text (2-space indent, keys in a fixed
// order); CSV uses ',' separators, '.' decimals and 17 significant digits.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eigcouple/analysis.hpp"

namespace eigcouple {

std::string format_double(double x);  // "%.17g"

std::string classify_report(const AnchorAnalysis& an, const std::string& family_name);

void write_surface_csv(std::ostream& os, const std::vector<SurfaceRow>& rows);
std::string surface_report(const AnchorAnalysis& an, const std::string& family_name, const Window& w,
                           std::size_t res, const std::vector<SurfaceRow>& rows);

std::string loop_report(const AnchorAnalysis& an, const LoopSpec& spec, const LoopReport& rep);
void write_loop_csv(std::ostream& os, const LoopReport& rep);

std::string find_ep_report(const EPSearchResult& res, const std::string& family_name);
std::string find_ep_failure_report(const NonConvergenceError& err, const std::string& family_name);

/// dp_fixed: components 2..n held fixed for the one-parameter views (zeros when absent).
std::string scenario_report(const AnchorAnalysis& an, const std::string& family_name,
                            const std::vector<double>& dp_fixed);

/// Sampled p1-section through the anchor at the given fixed offsets:
/// columns p1,re_plus,re_minus,im_plus,im_minus.
void write_section_csv(std::ostream& os, const AnchorAnalysis& an, const std::vector<double>& dp_fixed,
                       double p1_min, double p1_max, std::size_t samples);

}  // namespace eigcouple
