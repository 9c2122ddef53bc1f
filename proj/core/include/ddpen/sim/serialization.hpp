#pragma once

#include <iosfwd>
#include <string>

#include "ddpen/sim/executor.hpp"

namespace ddpen::sim {

std::string run_result_to_json(const RunResult& result, bool include_path = false);
/// t,x,y,heading
void write_path_csv(std::ostream& out, const RunResult& result);
/// result.json + path.csv in `dir`.
void save_run(const RunResult& result, const std::filesystem::path& dir);

}  // namespace ddpen::sim
