#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cybersir/calibration.hpp"
#include "cybersir/firmmodel.hpp"

namespace cybersir::io {

// Input validation failure with file/row context; the CLI maps it to exit
// code 1.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& file, std::size_t row, const std::string& message);
};

// --- CSV schemas (UTF-8, decimal point, '#' comment lines, header row) ---
// portfolio:     firm_id,sector,K,rho,subunit_idx,z0,mu_daily,sigma_daily
// infections:    day,size,count
// revenues:      firm_id,sector,year,revenue_meur
// sector_rates:  sector,share
// All monetary figures are EUR millions; z0 is a daily revenue level.

std::vector<firmmodel::Firm> read_portfolio_csv(const std::string& path);
void write_portfolio_csv(const std::string& path, const std::vector<firmmodel::Firm>& firms);

calibration::InfectionPanel read_infections_csv(const std::string& path);
void write_infections_csv(const std::string& path, const calibration::InfectionPanel& panel);

std::vector<calibration::RevenueSeries> read_revenues_csv(const std::string& path);
void write_revenues_csv(const std::string& path,
                        const std::vector<calibration::RevenueSeries>& panel);

std::vector<calibration::SectorRate> read_sector_rates_csv(const std::string& path);

// Generic numeric table writer for the plot-ready outputs.
void write_table_csv(const std::string& path, const std::string& unit_comment,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

// --- theta.json: the six coefficients, the size law, diagnostics, seed ---
struct ThetaDocument {
    calibration::ThetaSpec theta;
    firmmodel::ZipfSpec zipf{1.5, 1.0, 1};
    double j2 = 0.0;
    bool converged = true;
    long evaluations = 0;
    std::uint64_t seed = 0;
};

ThetaDocument read_theta_json(const std::string& path);
void write_theta_json(const std::string& path, const ThetaDocument& doc);

// full-precision decimal formatting (round-trips binary64)
std::string format_double(double v);

} // namespace cybersir::io
