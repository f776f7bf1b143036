#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gasket/errors.hpp"

namespace gasket {

inline constexpr const char* kLabVersion = "1.0.0";

// Flat key=value experiment configuration; the same format serves as the
// reproducibility manifest, so a run can be replayed from its own output.
class Config {
  public:
    Config() = default;

    static Config parse_file(const std::string& path);
    // Tokens of the form key=value (later tokens override earlier ones).
    static Config parse_tokens(const std::vector<std::string>& tokens);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double get_num(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;

    void set(const std::string& key, const std::string& value);
    void set_num(const std::string& key, double value);
    void set_int(const std::string& key, long long value);

    const std::map<std::string, std::string>& items() const { return items_; }
    void write_file(const std::string& path) const;

  private:
    std::map<std::string, std::string> items_;
};

// Shortest round-trip decimal representation used in every CSV cell.
std::string format_double(double v);

// Writes a CSV with a '# key=value ...' provenance header (parameters plus
// version), a column-name row, and %.17g-formatted data rows.
void write_csv(const std::string& path, const Config& params,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

// Executes one subcommand (spectrum, ids, sausage, survival, enlarge-check,
// fit, selftest), writing manifest.txt plus result CSVs into out_dir.
// Returns the process exit status; failures leave error.txt in out_dir.
int run_command(const std::string& command, Config cfg, const std::string& out_dir);

// Reduced-size invariant suite across all modules. renorm_perturbation != 1
// is the fault-injection hook: it must make the scaling checks fail.
struct SelftestResult {
    std::vector<std::pair<std::string, bool>> checks;
    bool all_pass = true;
};

SelftestResult run_selftest(double renorm_perturbation, std::uint64_t seed);

}  // namespace gasket
