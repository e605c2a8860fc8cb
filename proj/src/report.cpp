#include "wrg/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

namespace wrg {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;  // nan / inf land here; the 17-digit text is kept as-is
}

void write_flow_csv(std::ostream& os, const FlowReport& rep, int N) {
    os << kReportHeader << "\n";
    os << "scheme,d,N,M,value,defect,tail_bound\n";
    for (const FlowRow& row : rep.rows)
        os << scheme_name(rep.scheme) << ',' << rep.d << ',' << N << ','
           << row.M << ',' << format_double(row.value) << ','
           << format_double(row.defect) << ','
           << format_double(rep.limit_tail) << "\n";
}

void write_causality_csv(std::ostream& os, const CausalityScan& scan) {
    os << kReportHeader << "\n";
    os << "t,M,exact_norm,lr_bound\n";
    for (const CausalityCell& cell : scan.cells)
        os << format_double(cell.t) << ',' << cell.M << ','
           << format_double(cell.exact_norm) << ','
           << format_double(cell.lr_bound) << "\n";
}

nlohmann::json flow_json(const FlowReport& rep, int N) {
    nlohmann::json rows = nlohmann::json::array();
    for (const FlowRow& row : rep.rows)
        rows.push_back({{"M", row.M},
                        {"value", row.value},
                        {"defect", row.defect},
                        {"consistency", row.consistency}});
    return {{"label", rep.label},
            {"scheme", scheme_name(rep.scheme)},
            {"d", rep.d},
            {"eps", rep.eps},
            {"r", rep.r},
            {"N", N},
            {"has_limit", rep.has_limit},
            {"divergence_expected", rep.divergence_expected},
            {"limit", rep.limit},
            {"limit_tail", rep.limit_tail},
            {"rows", rows}};
}

nlohmann::json causality_json(const CausalityScan& scan) {
    nlohmann::json cells = nlohmann::json::array();
    for (const CausalityCell& cell : scan.cells)
        cells.push_back({{"t", cell.t},
                         {"M", cell.M},
                         {"exact_norm", cell.exact_norm},
                         {"lr_bound", cell.lr_bound}});
    return {{"report", flow_json(scan.report, 0)},
            {"cells", cells},
            {"dist1", scan.dist1},
            {"velocity", scan.velocity},
            {"bound_dominates", scan.bound_dominates},
            {"decays_across_scales", scan.decays_across_scales}};
}

nlohmann::json filter_json(const FilterBank& bank) {
    const char* kind = nullptr;
    switch (bank.kind) {
        case FilterKind::haar: kind = "haar"; break;
        case FilterKind::daubechies: kind = "daubechies"; break;
        case FilterKind::point: kind = "point"; break;
        case FilterKind::momentum_shell: kind = "momentum_shell"; break;
    }
    nlohmann::json out = {{"kind", kind},
                          {"d", bank.d},
                          {"K", bank.K},
                          {"n0", bank.n0}};
    if (bank.kind == FilterKind::momentum_shell) {
        nlohmann::json taps = nlohmann::json::array();
        for (const cplx& c : bank.ctaps)
            taps.push_back({c.real(), c.imag()});
        out["ctaps"] = taps;
        out["shell_target_r"] = bank.shell_target_r;
    } else {
        out["taps"] = bank.taps;
    }
    return out;
}

}  // namespace wrg
