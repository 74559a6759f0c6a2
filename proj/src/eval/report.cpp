#include "mqcic/eval/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace mqcic::eval {

namespace {

std::string fmt(const std::optional<double>& v, int decimals) {
    if (!v) return "-";
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << *v;
    return os.str();
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& vs) {
    double sum = 0;
    int n = 0;
    for (const auto& v : vs) {
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
}

}  // namespace

CellScore summarize_scores(const CellKey& key, const std::vector<InstanceScore>& scores,
                           long total_latency_ms) {
    CellScore cell;
    cell.key = key;
    cell.n_instances = scores.size();
    cell.total_latency_ms = total_latency_ms;
    if (scores.empty()) {
        cell.absent = true;
        return cell;
    }
    long correct = 0, a = 0, b = 0, c = 0, unresolved = 0;
    double fc_sum = 0, ff_sum = 0;
    long fc_n = 0, ff_n = 0, gaps = 0;
    for (const auto& s : scores) {
        if (s.correct) ++correct;
        if (s.fc) { fc_sum += *s.fc; ++fc_n; } else ++gaps;
        if (s.ff) { ff_sum += *s.ff; ++ff_n; }
        if (s.error_class) {
            switch (*s.error_class) {
                case ErrorClass::A: ++a; break;
                case ErrorClass::B: ++b; break;
                case ErrorClass::C: ++c; break;
            }
        }
        if (s.unresolved_error) ++unresolved;
    }
    const double n = static_cast<double>(scores.size());
    cell.accuracy = correct / n;
    if (fc_n > 0) cell.fc = fc_sum / fc_n;
    if (ff_n > 0) cell.ff = ff_sum / ff_n;
    cell.rate_fact = a / n;
    cell.rate_reasoning = b / n;
    cell.rate_other = c / n;
    cell.rate_total = *cell.rate_fact + *cell.rate_reasoning + *cell.rate_other;
    cell.unresolved = static_cast<std::size_t>(unresolved);
    cell.judge_gaps = static_cast<std::size_t>(gaps);
    return cell;
}

CellScore average_cells(const std::vector<CellScore>& runs) {
    if (runs.empty()) throw EmptySetError();
    if (runs.size() == 1) return runs.front();
    CellScore out = runs.front();
    out.n_runs = static_cast<int>(runs.size());
    auto collect = [&](auto getter) {
        std::vector<std::optional<double>> vs;
        for (const auto& r : runs) vs.push_back(getter(r));
        return mean_of(vs);
    };
    out.accuracy = collect([](const CellScore& c) { return c.accuracy; });
    out.fc = collect([](const CellScore& c) { return c.fc; });
    out.ff = collect([](const CellScore& c) { return c.ff; });
    out.rate_fact = collect([](const CellScore& c) { return c.rate_fact; });
    out.rate_reasoning = collect([](const CellScore& c) { return c.rate_reasoning; });
    out.rate_other = collect([](const CellScore& c) { return c.rate_other; });
    out.rate_total = collect([](const CellScore& c) { return c.rate_total; });
    out.total_latency_ms = 0;
    out.unresolved = 0;
    out.judge_gaps = 0;
    for (const auto& r : runs) {
        out.total_latency_ms += r.total_latency_ms;
        out.unresolved += r.unresolved;
        out.judge_gaps += r.judge_gaps;
        out.absent = out.absent || r.absent;
    }
    return out;
}

ReportTable build_report(std::vector<CellScore> cells) {
    std::sort(cells.begin(), cells.end(), [](const CellScore& x, const CellScore& y) {
        if (x.key.model != y.key.model) return x.key.model < y.key.model;
        if (x.key.method != y.key.method)
            return static_cast<int>(x.key.method) < static_cast<int>(y.key.method);
        return x.key.shots < y.key.shots;
    });
    return ReportTable{std::move(cells)};
}

std::string ReportTable::render_csv() const {
    std::ostringstream os;
    os << "model,method,shots,n,runs,accuracy,fact_correctness,fact_faithfulness,"
          "err_fact,err_reasoning,err_other,err_total,unresolved,judge_gaps,total_latency_ms,"
          "status\n";
    for (const auto& r : rows) {
        os << r.key.model << "," << to_string(r.key.method) << "," << r.key.shots << ","
           << r.n_instances << "," << r.n_runs << "," << fmt(r.accuracy, 4) << "," << fmt(r.fc, 4)
           << "," << fmt(r.ff, 4) << "," << fmt(r.rate_fact, 4) << "," << fmt(r.rate_reasoning, 4)
           << "," << fmt(r.rate_other, 4) << "," << fmt(r.rate_total, 4) << "," << r.unresolved
           << "," << r.judge_gaps << "," << r.total_latency_ms << ","
           << (r.absent ? "absent" : "ok") << "\n";
    }
    return os.str();
}

std::string ReportTable::render_markdown() const {
    std::ostringstream os;
    os << "| model | method | shots | n | acc | FC | FF | err A | err B | err C | err total | "
          "status |\n";
    os << "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        os << "| " << r.key.model << " | " << to_string(r.key.method) << " | " << r.key.shots
           << " | " << r.n_instances << " | " << fmt(r.accuracy, 4) << " | " << fmt(r.fc, 4)
           << " | " << fmt(r.ff, 4) << " | " << fmt(r.rate_fact, 2) << " | "
           << fmt(r.rate_reasoning, 2) << " | " << fmt(r.rate_other, 2) << " | "
           << fmt(r.rate_total, 2) << " | " << (r.absent ? "absent" : "ok") << " |\n";
    }
    return os.str();
}

}  // namespace mqcic::eval
