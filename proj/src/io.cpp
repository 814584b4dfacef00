#include "tjeffreys/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "tjeffreys/error.hpp"

namespace tjeffreys::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        fields.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

double parse_double(std::string_view text, const std::string& where) {
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ValidationError(where + ": cannot parse '" + std::string(text) + "' as a number");
    }
    return value;
}

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!trim(line).empty()) return true;
    }
    return false;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    return in;
}

// Piecewise log-linear interpolation of a tabulated density.
NuLogDensity table_density(std::vector<std::pair<double, double>> table) {
    std::sort(table.begin(), table.end());
    std::vector<double> log_nu;
    std::vector<double> log_density;
    for (const auto& [nu, density] : table) {
        if (!(nu > 0.0) || !(density >= 0.0)) throw ValidationError("custom prior table: need nu > 0, density >= 0");
        log_nu.push_back(std::log(nu));
        log_density.push_back(density > 0.0 ? std::log(density) : -std::numeric_limits<double>::infinity());
    }
    if (log_nu.size() < 2) throw ValidationError("custom prior table needs at least two rows");
    return [log_nu, log_density](double nu) {
        const double x = std::log(nu);
        if (x < log_nu.front() || x > log_nu.back()) return -std::numeric_limits<double>::infinity();
        auto hi = std::upper_bound(log_nu.begin(), log_nu.end(), x);
        if (hi == log_nu.end()) return log_density.back();
        const std::size_t k = static_cast<std::size_t>(hi - log_nu.begin());
        const double t = (x - log_nu[k - 1]) / (log_nu[k] - log_nu[k - 1]);
        if (std::isinf(log_density[k - 1]) || std::isinf(log_density[k])) {
            return t < 1.0 ? log_density[k - 1] : log_density[k];
        }
        return log_density[k - 1] + t * (log_density[k] - log_density[k - 1]);
    };
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Dataset parse_dataset_csv(std::istream& in, bool intercept) {
    std::string line;
    if (!next_data_line(in, line)) throw ValidationError("dataset CSV is empty");
    const auto header = split(line);
    if (header.empty() || header.front() != "y") throw ValidationError("dataset CSV: first header column must be 'y'");
    const std::size_t columns = header.size();
    if (columns < 2 && !intercept) {
        throw ValidationError("dataset CSV has no covariate columns (use --intercept for a mean-only model)");
    }

    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (next_data_line(in, line)) {
        ++line_no;
        const auto fields = split(line);
        if (fields.size() != columns) {
            throw ValidationError("dataset CSV line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        for (auto f : fields) row.push_back(parse_double(f, "dataset CSV line " + std::to_string(line_no)));
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    const int covariates = static_cast<int>(columns) - 1;
    const int offset = intercept ? 1 : 0;
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, covariates + offset);
    for (int i = 0; i < n; ++i) {
        y[i] = rows[i][0];
        if (intercept) X(i, 0) = 1.0;
        for (int j = 0; j < covariates; ++j) X(i, j + offset) = rows[i][j + 1];
    }
    return Dataset(std::move(y), std::move(X));
}

Dataset load_dataset_csv(const std::filesystem::path& path, bool intercept) {
    auto in = open_input(path);
    return parse_dataset_csv(in, intercept);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << "y";
    for (int j = 1; j <= data.p(); ++j) out << ",x" << j;
    out << '\n';
    for (int i = 0; i < data.n(); ++i) {
        out << format_double(data.y()[i]);
        for (int j = 0; j < data.p(); ++j) out << ',' << format_double(data.X()(i, j));
        out << '\n';
    }
}

PriorSpec parse_custom_prior(const json& doc, int p, std::string label) {
    static const std::vector<std::string> known = {"schema_version", "a", "shape", "support", "table"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ValidationError("custom prior: unknown key '" + key + "'");
        }
    }
    if (!doc.contains("a") || !doc.at("a").is_number()) throw ValidationError("custom prior: numeric 'a' required");
    if (!doc.contains("shape") || !doc.at("shape").is_string()) {
        throw ValidationError("custom prior: 'shape' required");
    }
    const double a = doc.at("a").get<double>();
    const std::string shape = doc.at("shape").get<std::string>();

    NuLogDensity density;
    if (shape == "independence") {
        density = [](double nu) { return nu_prior_log_unnormalized(nu, PriorKind::IndependenceJeffreys, 1); };
    } else if (shape == "jeffreys-rule") {
        density = [p](double nu) { return nu_prior_log_unnormalized(nu, PriorKind::JeffreysRule, p); };
    } else if (shape == "flat") {
        density = [](double) { return 0.0; };
    } else if (shape == "table") {
        if (!doc.contains("table") || !doc.at("table").is_array()) {
            throw ValidationError("custom prior: shape 'table' needs a 'table' array");
        }
        std::vector<std::pair<double, double>> rows;
        for (const auto& row : doc.at("table")) {
            if (!row.is_array() || row.size() != 2) throw ValidationError("custom prior: table rows are [nu, density]");
            rows.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
        density = table_density(std::move(rows));
    } else {
        throw ValidationError("custom prior: unknown shape '" + shape + "'");
    }

    PriorSpec spec = PriorSpec::custom(p, a, std::move(density), std::move(label));
    if (doc.contains("support")) {
        const auto& s = doc.at("support");
        if (!s.is_array() || s.size() != 2) throw ValidationError("custom prior: support is [lower, upper|null]");
        const double lower = s[0].is_null() ? 0.0 : s[0].get<double>();
        const double upper = s[1].is_null() ? std::numeric_limits<double>::infinity() : s[1].get<double>();
        spec = spec.truncated(lower, upper);
    }
    return spec;
}

PriorSpec load_custom_prior(const std::filesystem::path& path, int p) {
    auto in = open_input(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("custom prior " + path.string() + ": " + e.what());
    }
    return parse_custom_prior(doc, p, "custom:" + path.filename().string());
}

PriorSpec parse_prior(std::string_view arg, int p) {
    if (arg == "independence" || arg == "independence-jeffreys") return PriorSpec::independence_jeffreys(p);
    if (arg == "jeffreys-rule") return PriorSpec::jeffreys_rule(p);
    if (arg.rfind("custom:", 0) == 0) return load_custom_prior(std::string(arg.substr(7)), p);
    throw ValidationError("unknown prior '" + std::string(arg) + "' (expected independence, jeffreys-rule, custom:<file>)");
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << "iter";
    for (int j = 1; j <= trace.p; ++j) out << ",beta_" << j;
    out << ",sigma2,nu\n";
    for (std::size_t k = 0; k < trace.draws.size(); ++k) {
        const auto& d = trace.draws[k];
        out << (k < trace.iterations.size() ? trace.iterations[k] : static_cast<int>(k));
        for (Eigen::Index j = 0; j < d.beta.size(); ++j) out << ',' << format_double(d.beta[j]);
        out << ',' << format_double(d.sigma2) << ',' << format_double(d.nu) << '\n';
    }
}

Trace read_trace_csv(std::istream& in) {
    std::string line;
    if (!next_data_line(in, line)) throw ValidationError("trace CSV is empty");
    const auto header = split(line);
    if (header.size() < 4 || header.front() != "iter") throw ValidationError("trace CSV: unexpected header");
    Trace trace;
    trace.p = static_cast<int>(header.size()) - 3;
    while (next_data_line(in, line)) {
        const auto fields = split(line);
        if (fields.size() != header.size()) throw ValidationError("trace CSV: ragged row");
        Draw d;
        d.beta.resize(trace.p);
        trace.iterations.push_back(static_cast<int>(parse_double(fields[0], "trace CSV")));
        for (int j = 0; j < trace.p; ++j) d.beta[j] = parse_double(fields[j + 1], "trace CSV");
        d.sigma2 = parse_double(fields[trace.p + 1], "trace CSV");
        d.nu = parse_double(fields[trace.p + 2], "trace CSV");
        trace.draws.push_back(std::move(d));
    }
    return trace;
}

void write_prior_curve_csv(std::ostream& out, const std::vector<PriorCurvePoint>& rows, std::string_view kind) {
    out << "nu,log_unnormalized_density,density,kind\n";
    for (const auto& r : rows) {
        out << format_double(r.nu) << ',' << format_double(r.log_unnormalized) << ',' << format_double(r.density)
            << ',' << kind << '\n';
    }
}

std::vector<PriorCurvePoint> read_prior_curve_csv(std::istream& in) {
    std::string line;
    if (!next_data_line(in, line)) throw ValidationError("prior curve CSV is empty");
    std::vector<PriorCurvePoint> rows;
    while (next_data_line(in, line)) {
        const auto f = split(line);
        if (f.size() != 4) throw ValidationError("prior curve CSV: expected 4 fields");
        auto number = [](std::string_view s) {
            if (s == "-inf") return -std::numeric_limits<double>::infinity();
            if (s == "inf") return std::numeric_limits<double>::infinity();
            return parse_double(s, "prior curve CSV");
        };
        rows.push_back({number(f[0]), number(f[1]), number(f[2])});
    }
    return rows;
}

void write_divergence_csv(std::ostream& out, const std::vector<Evidence>& evidence) {
    out << "nu,c,eps,value,classification\n";
    for (const auto& e : evidence) {
        for (const auto& g : e.growth) {
            out << format_double(e.nu) << ',' << format_double(e.c) << ',' << format_double(g.eps) << ','
                << format_double(g.value) << ',' << to_string(e.classification) << '\n';
        }
    }
}

json to_json(const AuditReport& report) {
    json evidence = json::array();
    for (const auto& e : report.evidence) {
        json growth = json::array();
        for (const auto& g : e.growth) growth.push_back({{"eps", g.eps}, {"value", g.value}});
        evidence.push_back({{"nu", e.nu},
                            {"c", e.c},
                            {"rate", e.rate},
                            {"classification", std::string(to_string(e.classification))},
                            {"verified", e.verified},
                            {"regime", e.regime},
                            {"growth", growth}});
    }
    return {{"schema_version", kSchemaVersion},
            {"verdict", std::string(to_string(report.verdict))},
            {"critical_nu", report.critical_nu},
            {"a", report.a},
            {"n", report.n},
            {"p", report.p},
            {"prior", report.prior},
            {"note", report.note},
            {"evidence", evidence}};
}

AuditReport audit_report_from_json(const json& doc) {
    AuditReport r;
    r.verdict = parse_verdict(doc.at("verdict").get<std::string>());
    r.critical_nu = doc.at("critical_nu").get<double>();
    r.a = doc.at("a").get<double>();
    r.n = doc.at("n").get<int>();
    r.p = doc.at("p").get<int>();
    r.prior = doc.value("prior", "");
    r.note = doc.value("note", "");
    for (const auto& e : doc.at("evidence")) {
        Evidence ev;
        ev.nu = e.at("nu").get<double>();
        ev.c = e.at("c").get<double>();
        ev.rate = e.value("rate", 0.0);
        ev.classification = parse_classification(e.at("classification").get<std::string>());
        ev.verified = e.value("verified", false);
        ev.regime = e.value("regime", "");
        for (const auto& g : e.at("growth")) ev.growth.push_back({g.at("eps").get<double>(), g.at("value").get<double>()});
        r.evidence.push_back(std::move(ev));
    }
    return r;
}

json to_json(const Summary& summary) {
    json params = json::array();
    for (const auto& p : summary.parameters) {
        params.push_back({{"name", p.name},
                          {"mean", p.mean},
                          {"sd", p.sd},
                          {"lower", p.lower},
                          {"upper", p.upper},
                          {"ess", p.ess}});
    }
    return {{"schema_version", kSchemaVersion},
            {"draws", summary.draws},
            {"seed", summary.seed},
            {"acceptance_rate_nu", summary.acceptance_rate_nu},
            {"interval", "equal-tailed 95%"},
            {"parameters", params}};
}

Summary summary_from_json(const json& doc) {
    Summary s;
    s.draws = doc.at("draws").get<int>();
    s.seed = doc.at("seed").get<std::uint64_t>();
    s.acceptance_rate_nu = doc.at("acceptance_rate_nu").get<double>();
    for (const auto& p : doc.at("parameters")) {
        s.parameters.push_back({p.at("name").get<std::string>(), p.at("mean").get<double>(), p.at("sd").get<double>(),
                                p.at("lower").get<double>(), p.at("upper").get<double>(), p.at("ess").get<double>()});
    }
    return s;
}

}  // namespace tjeffreys::io
