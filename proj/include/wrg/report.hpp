#pragma once
// ===========================================================================
// CSV / JSON serialization of convergence reports.
//
// The CSV schema is versioned through the leading "#wavelet-rg-report v1"
// line; column sets vary per experiment but the version line is shared.
// JSON objects keep their keys sorted (nlohmann's default object is an
// ordered map), so a fixed configuration yields byte-identical documents;
// callers isolate the one timestamp field themselves. NaN defects (schemes
// without a limit) serialize as "nan" in CSV and null in JSON.
// ===========================================================================

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "wrg/dynamics.hpp"
#include "wrg/filters.hpp"
#include "wrg/states.hpp"

namespace wrg {

inline constexpr const char* kReportHeader = "#wavelet-rg-report v1";

// shortest decimal string that parses back to exactly v
std::string format_double(double v);

// columns: scheme,d,N,M,value,defect,tail_bound (tail_bound echoes the
// report-level limit_tail; per-row consistency lives in the JSON document)
void write_flow_csv(std::ostream& os, const FlowReport& rep, int N);

// heatmap columns: t,M,exact_norm,lr_bound
void write_causality_csv(std::ostream& os, const CausalityScan& scan);

nlohmann::json flow_json(const FlowReport& rep, int N);
nlohmann::json causality_json(const CausalityScan& scan);
nlohmann::json filter_json(const FilterBank& bank);

}  // namespace wrg
