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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vd/noise.hpp"

namespace vd {

/// Version tag of the records/aggregate CSV column layout.
inline constexpr const char* kRecordsSchemaVersion = "vdsim-records-v1";

/// One (instance, channel, eps) result row; one per plotted point.
struct SweepRecord {
    int instance_id = 0;
    std::uint64_t seed = 0;
    ChannelKind channel = ChannelKind::Depolarizing;
    double eps = 0.0;
    double cost_unmitigated = 0.0;
    double cost_mitigated = 0.0;
    double ratio_ideal = 0.0;
    double ratio_unmitigated = 0.0;
    double ratio_mitigated = 0.0;
    long long min_samples_unmitigated = 1;
    long long min_samples_mitigated = 1;
    double coherent_mismatch = 0.0;
    bool mismatch_reliable = true;
    double alpha_opt = 0.0;  ///< optimum of the mitigated objective (NaN for thermal rows)
    double beta_opt = 0.0;
};

/// Per-(channel, eps) means over instances; the plotted curves.
struct AggregateRow {
    ChannelKind channel = ChannelKind::Depolarizing;
    double eps = 0.0;
    double mean_dist_unmitigated = 0.0;  ///< mean of (ratio_ideal - ratio_unmitigated)
    double mean_dist_mitigated = 0.0;
    double mean_ratio_unmitigated = 0.0;
    double mean_ratio_mitigated = 0.0;
    double mean_min_samples_unmitigated = 0.0;
    double mean_min_samples_mitigated = 0.0;
    double mean_coherent_mismatch = 0.0;
    /// 1 - mitigated distance / unmitigated distance; absent where the
    /// unmitigated distance vanishes (the eps = 0 row).
    std::optional<double> error_reduction;
};

std::vector<AggregateRow> summarize(const std::vector<SweepRecord>& records);

void write_records_csv(const std::string& path, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_records_csv(const std::string& path);
void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);

/// Format a double with 17 significant digits (lossless round-trip).
std::string format_double(double value);

}  // namespace vd
