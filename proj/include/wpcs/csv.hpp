#ifndef WPCS_CSV_HPP
#define WPCS_CSV_HPP

#include <cstdio>
#include <sstream>
#include <string>

namespace wpcs {

/// Numeric field formatting: 9 significant digits.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
}

/// Row builder; fields joined by commas, no quoting (schema has none).
class CsvRow {
public:
    CsvRow& field(const std::string& s) {
        if (!first_) os_ << ',';
        first_ = false;
        os_ << s;
        return *this;
    }
    CsvRow& field(const char* s) { return field(std::string(s)); }
    CsvRow& field(double v) { return field(csv_num(v)); }
    CsvRow& field(long v) { return field(std::to_string(v)); }
    CsvRow& field(int v) { return field(std::to_string(v)); }
    CsvRow& field(unsigned long long v) { return field(std::to_string(v)); }

    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
    bool first_ = true;
};

inline constexpr int csv_schema_version = 1;

inline constexpr const char* run_csv_header =
    "schema_version,scenario_id,replication,seed,layout,beacon_mode,beacon_count,"
    "antenna,radio,policy,mean_harvested_w,mean_consumed_w,lifetime_s,sustainable,"
    "lifetime_gain,data_share";

inline constexpr const char* sweep_csv_header =
    "schema_version,scenario_id,key,value,replications,mean_harvested_w,harvested_ci,"
    "mean_consumed_w,consumed_ci,mean_lifetime_s,lifetime_ci,lifetime_gain,gain_ci,"
    "sustainable_frac,data_share,data_share_ci";

inline constexpr const char* compare_csv_header =
    "schema_version,replication,seed,mean_harvested_w_a,mean_harvested_w_b,"
    "d_mean_harvested_w,lifetime_s_a,lifetime_s_b,d_lifetime_s,lifetime_gain_a,"
    "lifetime_gain_b,d_lifetime_gain,data_share_a,data_share_b,d_data_share";

} // namespace wpcs

#endif
