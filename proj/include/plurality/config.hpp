#pragma once

// Text configuration: one "key = value" per line, '#' starts a comment.
//
//   k              single candidate count, shorthand for k_counts = k:1
//   k_counts       "3:0.5,4:0.5" (k:proportion pairs)
//   generations    T
//   elections      n, elections per generation
//   trials         independent runs
//   initial        F_0, a distribution spec ("uniform", "uniform:a:b",
//                  "beta:a:b", "double-weibull:shape:loc:scale")
//   atoms          point masses added to F_0, "pos:mass,pos:mass"
//   voters         voter distribution spec, same syntax as initial
//   tie_break      left-right | equal-split
//   symmetry       true | false (mirror copies about 1/2)
//   epsilon        uniform-noise probability
//   perturbation   variance of Gaussian copy noise
//   memory         generations a candidate may copy from
//   top_h          copy from the top h finishers
//   seed           master seed
//   allow_combined true | false (permit several variants at once)
//   keep_pools     true | false
//   probes         extra exact-ecdf points, "0.1,0.25"

#include <filesystem>
#include <string>
#include <string_view>

#include "plurality/engine.hpp"

namespace plurality {

// Applies one setting; throws ParameterError prefixed with the field name.
void apply_setting(SimulationConfig& cfg, std::string_view key, std::string_view value);

// Parses and validates. Unknown keys and bad values throw ParameterError.
SimulationConfig parse_config_text(std::string_view text, SimulationConfig base = {});
// Throws IoError when the file cannot be read.
SimulationConfig parse_config_file(const std::filesystem::path& path, SimulationConfig base = {});

// Canonical text form; parse_config_text(format_config(c)) == c.
std::string format_config(const SimulationConfig& cfg);

}  // namespace plurality
