#pragma once

#include <iosfwd>
#include <string>

#include "lipschitz/studies.hpp"

namespace lipschitz {

// $LIPSCHITZ_VERDICTS if set, else the file shipped with the sources.
std::string default_thresholds_path();
Thresholds load_thresholds(const std::string& path);
Thresholds parse_thresholds(const std::string& json_text);

// Columns study,kind,c,n,estimate,se,nsamples,seed; a censored estimate is
// written as "<bound".
std::string csv_header();
void write_csv(std::ostream& os, const StudyResult& result, bool header = true);

// Full StudyResult. Wall-clock time is included only on request so that
// reruns with the same seed produce identical bytes.
void write_json(std::ostream& os, const StudyResult& result, bool with_timing = false);
// Reads what write_json wrote; fit and verdicts are taken as stored.
StudyResult read_json(std::istream& is);

}  // namespace lipschitz
