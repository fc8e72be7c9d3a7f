// Copyright 2026 The vdsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vd/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vd/errors.hpp"

namespace vd {

namespace {

constexpr const char* kRecordsHeader =
    "instance_id,seed,channel,eps,cost_unmitigated,cost_mitigated,ratio_ideal,"
    "ratio_unmitigated,ratio_mitigated,min_samples_unmitigated,min_samples_mitigated,"
    "coherent_mismatch,mismatch_reliable,alpha_opt,beta_opt";

constexpr const char* kAggregateHeader =
    "channel,eps,mean_dist_unmitigated,mean_dist_mitigated,mean_ratio_unmitigated,"
    "mean_ratio_mitigated,mean_min_samples_unmitigated,mean_min_samples_mitigated,"
    "mean_coherent_mismatch,error_reduction";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::vector<AggregateRow> summarize(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw contract_error("summarize: no records");
    // Keyed by (channel, eps); doubles compare exactly because every record of
    // a level carries the same grid value.
    std::map<std::pair<int, double>, std::vector<const SweepRecord*>> groups;
    for (const auto& r : records)
        groups[{static_cast<int>(r.channel), r.eps}].push_back(&r);

    std::vector<AggregateRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, group] : groups) {
        AggregateRow row;
        row.channel = static_cast<ChannelKind>(key.first);
        row.eps = key.second;
        const double n = static_cast<double>(group.size());
        for (const SweepRecord* r : group) {
            row.mean_dist_unmitigated += (r->ratio_ideal - r->ratio_unmitigated) / n;
            row.mean_dist_mitigated += (r->ratio_ideal - r->ratio_mitigated) / n;
            row.mean_ratio_unmitigated += r->ratio_unmitigated / n;
            row.mean_ratio_mitigated += r->ratio_mitigated / n;
            row.mean_min_samples_unmitigated += static_cast<double>(r->min_samples_unmitigated) / n;
            row.mean_min_samples_mitigated += static_cast<double>(r->min_samples_mitigated) / n;
            row.mean_coherent_mismatch += r->coherent_mismatch / n;
        }
        if (std::abs(row.mean_dist_unmitigated) > 1e-15)
            row.error_reduction = 1.0 - row.mean_dist_mitigated / row.mean_dist_unmitigated;
        rows.push_back(row);
    }
    return rows;
}

void write_records_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path);
    out << kRecordsHeader << "\n";
    for (const auto& r : records) {
        out << r.instance_id << ',' << r.seed << ',' << to_string(r.channel) << ','
            << format_double(r.eps) << ',' << format_double(r.cost_unmitigated) << ','
            << format_double(r.cost_mitigated) << ',' << format_double(r.ratio_ideal) << ','
            << format_double(r.ratio_unmitigated) << ',' << format_double(r.ratio_mitigated) << ','
            << r.min_samples_unmitigated << ',' << r.min_samples_mitigated << ','
            << format_double(r.coherent_mismatch) << ',' << (r.mismatch_reliable ? 1 : 0) << ','
            << format_double(r.alpha_opt) << ',' << format_double(r.beta_opt) << "\n";
    }
}

std::vector<SweepRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error(path + ": empty records file");
    if (line != kRecordsHeader)
        throw config_error(path + ": unexpected records header (schema " +
                           std::string(kRecordsSchemaVersion) + " expected)");
    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 15) throw config_error(path + ": malformed record line");
        SweepRecord r;
        r.instance_id = std::stoi(f[0]);
        r.seed = std::stoull(f[1]);
        r.channel = channel_kind_from_string(f[2]);
        r.eps = std::stod(f[3]);
        r.cost_unmitigated = std::stod(f[4]);
        r.cost_mitigated = std::stod(f[5]);
        r.ratio_ideal = std::stod(f[6]);
        r.ratio_unmitigated = std::stod(f[7]);
        r.ratio_mitigated = std::stod(f[8]);
        r.min_samples_unmitigated = std::stoll(f[9]);
        r.min_samples_mitigated = std::stoll(f[10]);
        r.coherent_mismatch = std::stod(f[11]);
        r.mismatch_reliable = f[12] == "1";
        r.alpha_opt = std::stod(f[13]);
        r.beta_opt = std::stod(f[14]);
        records.push_back(r);
    }
    return records;
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path);
    out << kAggregateHeader << "\n";
    for (const auto& row : rows) {
        out << to_string(row.channel) << ',' << format_double(row.eps) << ','
            << format_double(row.mean_dist_unmitigated) << ','
            << format_double(row.mean_dist_mitigated) << ','
            << format_double(row.mean_ratio_unmitigated) << ','
            << format_double(row.mean_ratio_mitigated) << ','
            << format_double(row.mean_min_samples_unmitigated) << ','
            << format_double(row.mean_min_samples_mitigated) << ','
            << format_double(row.mean_coherent_mismatch) << ',';
        if (row.error_reduction) out << format_double(*row.error_reduction);
        out << "\n";
    }
}

}  // namespace vd
