#include "cybersir/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cybersir::io {

namespace {

struct CsvFile {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line per row
};

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

CsvFile read_csv(const std::string& path, const std::vector<std::string>& expected_header)
{
    std::ifstream in(path);
    if (!in)
        throw SchemaError(path, 0, "cannot open file");

    CsvFile csv;
    csv.path = path;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        std::vector<std::string> fields = split_line(line);
        if (!have_header) {
            if (fields != expected_header) {
                std::string want;
                for (std::size_t i = 0; i < expected_header.size(); ++i)
                    want += (i ? "," : "") + expected_header[i];
                throw SchemaError(path, line_no, "header must be exactly '" + want + "'");
            }
            csv.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != expected_header.size())
            throw SchemaError(path, line_no,
                              "expected " + std::to_string(expected_header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
        csv.rows.push_back(std::move(fields));
        csv.line_numbers.push_back(line_no);
    }
    if (!have_header)
        throw SchemaError(path, 0, "missing header row");
    return csv;
}

double parse_double(const CsvFile& csv, std::size_t row, std::size_t col)
{
    const std::string& s = csv.rows[row][col];
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw SchemaError(csv.path, csv.line_numbers[row],
                          "column '" + csv.header[col] + "': not a finite number: '" + s + "'");
    return v;
}

long parse_long(const CsvFile& csv, std::size_t row, std::size_t col)
{
    const std::string& s = csv.rows[row][col];
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw SchemaError(csv.path, csv.line_numbers[row],
                          "column '" + csv.header[col] + "': not an integer: '" + s + "'");
    return v;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw SchemaError(path, 0, "cannot open file for writing");
    return out;
}

} // namespace

SchemaError::SchemaError(const std::string& file, std::size_t row, const std::string& message)
    : std::runtime_error(row == 0 ? file + ": " + message
                                  : file + ":" + std::to_string(row) + ": " + message)
{
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<firmmodel::Firm> read_portfolio_csv(const std::string& path)
{
    const CsvFile csv = read_csv(
        path, {"firm_id", "sector", "K", "rho", "subunit_idx", "z0", "mu_daily", "sigma_daily"});

    std::vector<firmmodel::Firm> firms;
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const std::string& id = csv.rows[r][0];
        const long size = parse_long(csv, r, 2);
        const double rho = parse_double(csv, r, 3);
        const long subunit = parse_long(csv, r, 4);
        firmmodel::Subunit su;
        su.z0 = parse_double(csv, r, 5);
        su.drift = parse_double(csv, r, 6);
        su.vol = parse_double(csv, r, 7);

        if (size < 1)
            throw SchemaError(path, csv.line_numbers[r], "K must be >= 1");
        if (!(su.z0 > 0.0))
            throw SchemaError(path, csv.line_numbers[r], "z0 must be > 0");
        if (!(su.vol > 0.0))
            throw SchemaError(path, csv.line_numbers[r], "sigma_daily must be > 0");

        auto [it, inserted] = index.try_emplace(id, firms.size());
        if (inserted) {
            firmmodel::Firm firm;
            firm.id = id;
            firm.sector = csv.rows[r][1];
            firm.rho = rho;
            firm.subunits.resize(static_cast<std::size_t>(size));
            firms.push_back(std::move(firm));
        }
        firmmodel::Firm& firm = firms[it->second];
        if (static_cast<std::size_t>(size) != firm.subunits.size())
            throw SchemaError(path, csv.line_numbers[r], "inconsistent K for firm " + id);
        if (subunit < 0 || static_cast<std::size_t>(subunit) >= firm.subunits.size())
            throw SchemaError(path, csv.line_numbers[r], "subunit_idx outside 0..K-1");
        firm.subunits[static_cast<std::size_t>(subunit)] = su;
    }
    for (const firmmodel::Firm& firm : firms) {
        for (const firmmodel::Subunit& su : firm.subunits)
            if (!(su.z0 > 0.0))
                throw SchemaError(path, 0, "firm " + firm.id + ": missing subunit rows");
        try {
            firm.validate();
        } catch (const std::invalid_argument& e) {
            throw SchemaError(path, 0, e.what());
        }
    }
    if (firms.empty())
        throw SchemaError(path, 0, "no firms");
    return firms;
}

void write_portfolio_csv(const std::string& path, const std::vector<firmmodel::Firm>& firms)
{
    std::ofstream out = open_out(path);
    out << "# daily revenue levels z0 in EUR millions\n";
    out << "firm_id,sector,K,rho,subunit_idx,z0,mu_daily,sigma_daily\n";
    for (const firmmodel::Firm& firm : firms)
        for (std::size_t j = 0; j < firm.size(); ++j)
            out << firm.id << ',' << firm.sector << ',' << firm.size() << ','
                << format_double(firm.rho) << ',' << j << ',' << format_double(firm.subunits[j].z0)
                << ',' << format_double(firm.subunits[j].drift) << ','
                << format_double(firm.subunits[j].vol) << '\n';
}

calibration::InfectionPanel read_infections_csv(const std::string& path)
{
    const CsvFile csv = read_csv(path, {"day", "size", "count"});
    long max_day = -1;
    long max_size = 0;
    std::vector<std::tuple<long, long, long>> cells;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const long day = parse_long(csv, r, 0);
        const long size = parse_long(csv, r, 1);
        const long count = parse_long(csv, r, 2);
        if (day < 0)
            throw SchemaError(path, csv.line_numbers[r], "day must be >= 0");
        if (size < 1)
            throw SchemaError(path, csv.line_numbers[r], "size must be >= 1");
        if (count < 0)
            throw SchemaError(path, csv.line_numbers[r], "count must be >= 0");
        max_day = std::max(max_day, day);
        max_size = std::max(max_size, size);
        cells.emplace_back(day, size, count);
    }
    if (cells.empty())
        throw SchemaError(path, 0, "no data rows");

    calibration::InfectionPanel panel;
    panel.counts.assign(static_cast<std::size_t>(max_day + 1),
                        std::vector<long>(static_cast<std::size_t>(max_size), 0));
    for (const auto& [day, size, count] : cells)
        panel.counts[static_cast<std::size_t>(day)][static_cast<std::size_t>(size - 1)] = count;
    return panel;
}

void write_infections_csv(const std::string& path, const calibration::InfectionPanel& panel)
{
    std::ofstream out = open_out(path);
    out << "# infected firm counts per day and size group\n";
    out << "day,size,count\n";
    for (std::size_t u = 0; u < panel.days(); ++u)
        for (std::size_t k = 0; k < panel.sizes(); ++k)
            out << u << ',' << (k + 1) << ',' << panel.counts[u][k] << '\n';
}

std::vector<calibration::RevenueSeries> read_revenues_csv(const std::string& path)
{
    const CsvFile csv = read_csv(path, {"firm_id", "sector", "year", "revenue_meur"});
    std::map<std::string, std::map<long, double>> by_firm;
    std::map<std::string, std::string> sector_of;
    std::vector<std::string> order;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const std::string& id = csv.rows[r][0];
        const long year = parse_long(csv, r, 2);
        const double revenue = parse_double(csv, r, 3);
        if (!(revenue > 0.0))
            throw SchemaError(path, csv.line_numbers[r], "revenue_meur must be > 0");
        if (by_firm.find(id) == by_firm.end())
            order.push_back(id);
        if (!by_firm[id].emplace(year, revenue).second)
            throw SchemaError(path, csv.line_numbers[r], "duplicate year for firm " + id);
        sector_of[id] = csv.rows[r][1];
    }
    if (order.empty())
        throw SchemaError(path, 0, "no data rows");

    std::vector<calibration::RevenueSeries> panel;
    panel.reserve(order.size());
    std::size_t years = 0;
    for (const std::string& id : order) {
        calibration::RevenueSeries row;
        row.firm_id = id;
        row.sector = sector_of[id];
        long prev_year = 0;
        bool first = true;
        for (const auto& [year, revenue] : by_firm[id]) {
            if (!first && year != prev_year + 1)
                throw SchemaError(path, 0, "firm " + id + ": years must be consecutive");
            row.by_year.push_back(revenue);
            prev_year = year;
            first = false;
        }
        if (years == 0)
            years = row.by_year.size();
        else if (row.by_year.size() != years)
            throw SchemaError(path, 0, "firm " + id + ": year count differs from other firms");
        panel.push_back(std::move(row));
    }
    return panel;
}

void write_revenues_csv(const std::string& path,
                        const std::vector<calibration::RevenueSeries>& panel)
{
    std::ofstream out = open_out(path);
    out << "# annual revenues in EUR millions\n";
    out << "firm_id,sector,year,revenue_meur\n";
    for (const calibration::RevenueSeries& row : panel)
        for (std::size_t t = 0; t < row.by_year.size(); ++t)
            out << row.firm_id << ',' << row.sector << ',' << (t + 1) << ','
                << format_double(row.by_year[t]) << '\n';
}

std::vector<calibration::SectorRate> read_sector_rates_csv(const std::string& path)
{
    const CsvFile csv = read_csv(path, {"sector", "share"});
    std::vector<calibration::SectorRate> rates;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        calibration::SectorRate rate;
        rate.sector = csv.rows[r][0];
        rate.share = parse_double(csv, r, 1);
        if (rate.share < 0.0 || rate.share > 1.0)
            throw SchemaError(path, csv.line_numbers[r], "share outside [0,1]");
        rates.push_back(std::move(rate));
    }
    if (rates.empty())
        throw SchemaError(path, 0, "no data rows");
    return rates;
}

void write_table_csv(const std::string& path, const std::string& unit_comment,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows)
{
    std::ofstream out = open_out(path);
    if (!unit_comment.empty())
        out << "# " << unit_comment << '\n';
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

ThetaDocument read_theta_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SchemaError(path, 0, "cannot open file");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path, 0, std::string("invalid JSON: ") + e.what());
    }
    try {
        ThetaDocument doc;
        doc.theta.kappa_a = j.at("kappa_a").get<double>();
        doc.theta.sigma_a = j.at("sigma_a").get<double>();
        doc.theta.a0 = j.at("a0_tilde").get<double>();
        doc.theta.gamma1_0 = j.at("gamma1_0").get<double>();
        doc.theta.beta1_0 = j.at("beta1_0").get<double>();
        doc.theta.h_star = j.at("h_star").get<double>();
        const auto& z = j.at("zipf");
        doc.zipf = firmmodel::ZipfSpec(z.at("exponent").get<double>(), z.at("scale").get<double>(),
                                       z.at("max_size").get<int>());
        doc.j2 = j.value("j2", 0.0);
        doc.converged = j.value("converged", true);
        doc.evaluations = j.value("evaluations", 0L);
        doc.seed = j.value("seed", std::uint64_t{0});
        doc.theta.validate();
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path, 0, std::string("missing or malformed field: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path, 0, e.what());
    }
}

void write_theta_json(const std::string& path, const ThetaDocument& doc)
{
    nlohmann::json j;
    j["kappa_a"] = doc.theta.kappa_a;
    j["sigma_a"] = doc.theta.sigma_a;
    j["a0_tilde"] = doc.theta.a0;
    j["gamma1_0"] = doc.theta.gamma1_0;
    j["beta1_0"] = doc.theta.beta1_0;
    j["h_star"] = doc.theta.h_star;
    j["zipf"] = {{"exponent", doc.zipf.exponent},
                 {"scale", doc.zipf.scale},
                 {"max_size", doc.zipf.max_size}};
    j["j2"] = doc.j2;
    j["converged"] = doc.converged;
    j["evaluations"] = doc.evaluations;
    j["seed"] = doc.seed;

    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace cybersir::io
