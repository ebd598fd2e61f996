#pragma once

#include <string>

#include <json.hpp>

#include "causkit/process.hpp"

namespace causkit {

/**
 * Process <-> JSON. Wires are listed outputs first. `data` is the flat
 * row-major array over (outputs, inputs); cpm data is the Choi matrix
 * J[(outs, ins), (outs, ins)] as [re, im] pairs.
 **/
nlohmann::json process_to_json(const Process& f);
Process process_from_json(const nlohmann::json& j);

std::string dump_process(const Process& f);
Process load_process_file(const std::string& path);
void save_process_file(const Process& f, const std::string& path);

}  // namespace causkit
