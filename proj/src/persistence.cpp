// SPDX-License-Identifier: Apache-2.0
//
// nfmap: near-field XL-MIMO radio map reconstruction
// Copyright (C) 2026 The nfmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nfmap/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nfmap
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

std::ofstream open_out(const fs::path &path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    return os;
}

std::ifstream open_in(const fs::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot read " + path.string());
    return is;
}

std::string format_double(double v, int precision)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

double parse_double(const std::string &s)
{
    const char *begin = s.c_str();
    char *end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin)
        throw std::runtime_error("not a number: '" + s + "'");
    while (*end == ' ' || *end == '\r')
        ++end;
    if (*end != '\0')
        throw std::runtime_error("not a number: '" + s + "'");
    return v;
}

// Splits one CSV line; fields may be double-quoted with "" as an escaped quote.
std::vector<std::string> split_csv(const std::string &line)
{
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k)
    {
        const char c = line[k];
        if (quoted)
        {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"')
            {
                field += '"';
                ++k;
            }
            else if (c == '"')
                quoted = false;
            else
                field += c;
        }
        else if (c == '"')
            quoted = true;
        else if (c == ',')
        {
            out.push_back(std::move(field));
            field.clear();
        }
        else if (c != '\r')
            field += c;
    }
    out.push_back(std::move(field));
    return out;
}

std::string quote_csv(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += "\"\"";
        else
            out += c;
    }
    return out + "\"";
}

// A quoted field may span lines; an odd quote count means the record continues.
bool inside_quotes(const std::string &line)
{
    return std::count(line.begin(), line.end(), '"') % 2 == 1;
}

} // namespace

void write_matrix_csv(const fs::path &path, const Eigen::MatrixXd &m, int precision)
{
    std::ofstream os = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
        {
            if (j)
                os << ',';
            os << format_double(m(i, j), precision);
        }
        os << '\n';
    }
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

Eigen::MatrixXd read_matrix_csv(const fs::path &path)
{
    std::ifstream is = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> row;
        for (const auto &f : split_csv(line))
            row.push_back(parse_double(f));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path.string() + ": ragged matrix");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw std::runtime_error(path.string() + ": empty matrix");
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

fs::path sidecar_path(const fs::path &csv)
{
    fs::path p = csv;
    return p.replace_extension(".json");
}

void write_json(const fs::path &path, const json &j)
{
    std::ofstream os = open_out(path);
    os << j.dump(2) << '\n';
}

json read_json(const fs::path &path)
{
    std::ifstream is = open_in(path);
    return json::parse(is);
}

json grid_to_json(const GridSpec &g)
{
    return {{"theta_min_deg", g.theta_min}, {"theta_max_deg", g.theta_max}, {"r_min_m", g.r_min},
            {"r_max_m", g.r_max},           {"n_theta", g.n_theta},         {"n_r", g.n_r}};
}

GridSpec grid_from_json(const json &j)
{
    GridSpec g;
    g.theta_min = j.value("theta_min_deg", g.theta_min);
    g.theta_max = j.value("theta_max_deg", g.theta_max);
    g.r_min = j.value("r_min_m", g.r_min);
    g.r_max = j.value("r_max_m", g.r_max);
    g.n_theta = j.value("n_theta", g.n_theta);
    g.n_r = j.value("n_r", g.n_r);
    g.validate();
    return g;
}

json scene_to_json(const Scene &s)
{
    return {{"grid", grid_to_json(s.grid)},
            {"n_elements", s.n_elements},
            {"carrier_freq_hz", s.carrier_freq},
            {"power_w", s.power}};
}

Scene scene_from_json(const json &j)
{
    Scene s;
    if (j.contains("grid"))
        s.grid = grid_from_json(j.at("grid"));
    s.n_elements = j.value("n_elements", s.n_elements);
    s.carrier_freq = j.value("carrier_freq_hz", s.carrier_freq);
    s.power = j.value("power_w", s.power);
    if (s.n_elements < 1 || !(s.carrier_freq > 0.0) || !(s.power > 0.0))
        throw std::invalid_argument("scene: n_elements, carrier_freq_hz and power_w must be positive");
    return s;
}

void write_tagged_matrix(const fs::path &path, const Eigen::MatrixXd &m, const std::string &kind,
                         const GridSpec &grid, const json &extra)
{
    write_matrix_csv(path, m);
    json meta = extra;
    meta["kind"] = kind;
    meta["grid"] = grid_to_json(grid);
    meta["rows"] = "angle index i";
    meta["cols"] = "radius index j";
    write_json(sidecar_path(path), meta);
}

void write_radio_map(const fs::path &path, const RadioMap &map, const Scene &scene)
{
    json extra = {{"n_elements", scene.n_elements},
                  {"carrier_freq_hz", scene.carrier_freq},
                  {"power_w", scene.power},
                  {"sigma_db", map.sigma_shadow},
                  {"seed", map.seed},
                  {"note", "radii start at r_min > 0 to keep 1/d finite"}};
    write_tagged_matrix(path, map.values, "radio_map", map.grid, extra);
}

MatrixFile read_tagged_matrix(const fs::path &path)
{
    MatrixFile f;
    f.values = read_matrix_csv(path);
    const fs::path side = sidecar_path(path);
    f.meta = fs::exists(side) ? read_json(side) : json::object();
    if (f.meta.contains("grid"))
        f.grid = grid_from_json(f.meta.at("grid"));
    else
    {
        f.grid.n_theta = static_cast<std::size_t>(f.values.rows());
        f.grid.n_r = static_cast<std::size_t>(f.values.cols());
    }
    if (f.values.rows() != static_cast<Eigen::Index>(f.grid.n_theta) ||
        f.values.cols() != static_cast<Eigen::Index>(f.grid.n_r))
        throw std::runtime_error(path.string() + ": matrix shape disagrees with its sidecar grid");
    return f;
}

void write_mask(const fs::path &path, const SampleMask &mask, const Eigen::MatrixXd &values,
                const SamplingStrategy &strategy, std::uint64_t seed)
{
    mask.validate();
    std::ofstream os = open_out(path);
    os << "i,j,value\n";
    for (const auto &[i, j] : mask.entries())
        os << i << ',' << j << ','
           << format_double(values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 17) << '\n';
    if (!os)
        throw std::runtime_error("write failed: " + path.string());

    json meta = {{"kind", "mask"},        {"n_theta", mask.n_theta}, {"n_r", mask.n_r},
                 {"rho", mask.target_ratio}, {"strategy", strategy_name(strategy)}, {"seed", seed}};
    if (const auto *mu = std::get_if<MuLawSampling>(&strategy))
    {
        meta["mu"] = mu->mu;
        if (mu->z0)
            meta["z0_m"] = *mu->z0;
        if (mu->z1)
            meta["z1_m"] = *mu->z1;
    }
    write_json(sidecar_path(path), meta);
}

MaskFile read_mask(const fs::path &path)
{
    MaskFile f;
    f.meta = read_json(sidecar_path(path));
    f.mask.n_theta = f.meta.at("n_theta").get<std::size_t>();
    f.mask.n_r = f.meta.at("n_r").get<std::size_t>();
    f.mask.target_ratio = f.meta.value("rho", 0.0);
    f.mask.per_angle.assign(f.mask.n_theta, {});
    f.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(f.mask.n_theta),
                                         static_cast<Eigen::Index>(f.mask.n_r),
                                         std::numeric_limits<double>::quiet_NaN());

    std::ifstream is = open_in(path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("i,j,value", 0) != 0)
        throw std::runtime_error(path.string() + ": expected header i,j,value");
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        const auto fields = split_csv(line);
        if (fields.size() != 3)
            throw std::runtime_error(path.string() + ": expected 3 fields per line");
        const auto i = static_cast<std::size_t>(std::stoull(fields[0]));
        const auto j = static_cast<std::size_t>(std::stoull(fields[1]));
        if (i >= f.mask.n_theta || j >= f.mask.n_r)
            throw std::runtime_error(path.string() + ": index out of range");
        f.mask.per_angle[i].push_back(j);
        f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(fields[2]);
    }
    for (auto &row : f.mask.per_angle)
        std::sort(row.begin(), row.end());
    f.mask.validate();
    return f;
}

json huber_to_json(const HuberResult &h)
{
    return {{"threshold", h.threshold}, {"iterations", h.iterations}, {"converged", h.converged}, {"delta", h.center}};
}

json completion_to_json(const CompletionResult &c, bool with_trace)
{
    json j = {{"iterations", c.iterations},
              {"converged", c.converged},
              {"final_nuclear_norm", c.final_nuclear_norm},
              {"max_violation", c.max_violation},
              {"threshold", c.threshold}};
    if (with_trace)
        j["merit_trace"] = c.merit_trace;
    return j;
}

namespace
{

constexpr const char *kRecordHeader =
    "point,method,strategy,rho,sigma,mu,seed,nmse,wall_time,delta,iterations,converged,error";

} // namespace

void write_records(std::ostream &os, const std::vector<MetricsRecord> &records)
{
    os << "# nmse in linear power; radii start at r_min = 0.1 m\n" << kRecordHeader << '\n';
    for (const auto &r : records)
    {
        os << r.point << ',' << quote_csv(r.method) << ',' << quote_csv(r.strategy) << ','
           << format_double(r.rho, 17) << ',' << format_double(r.sigma, 17) << ',' << format_double(r.mu, 17) << ','
           << r.seed << ',' << format_double(r.nmse, 17) << ',' << format_double(r.wall_time, 17) << ','
           << format_double(r.delta, 17) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
           << quote_csv(r.error) << '\n';
    }
}

void write_records(const fs::path &path, const std::vector<MetricsRecord> &records)
{
    std::ofstream os = open_out(path);
    write_records(os, records);
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

std::vector<MetricsRecord> read_records(std::istream &is)
{
    std::vector<MetricsRecord> out;
    std::string line;
    bool header = false;
    while (std::getline(is, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        std::string more;
        while (inside_quotes(line) && std::getline(is, more))
            line += '\n' + more;
        if (!header)
        {
            if (line.rfind(kRecordHeader, 0) != 0)
                throw std::runtime_error("records: unexpected header");
            header = true;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 13)
            throw std::runtime_error("records: expected 13 fields");
        MetricsRecord r;
        r.point = static_cast<std::size_t>(std::stoull(f[0]));
        r.method = f[1];
        r.strategy = f[2];
        r.rho = parse_double(f[3]);
        r.sigma = parse_double(f[4]);
        r.mu = parse_double(f[5]);
        r.seed = std::stoull(f[6]);
        r.nmse = parse_double(f[7]);
        r.wall_time = parse_double(f[8]);
        r.delta = parse_double(f[9]);
        r.iterations = std::stoi(f[10]);
        r.converged = f[11] == "1";
        r.error = f[12];
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<MetricsRecord> read_records(const fs::path &path)
{
    std::ifstream is = open_in(path);
    return read_records(is);
}

} // namespace nfmap
