#pragma once

#include <filesystem>
#include <string>

#include "walkopt/instance.hpp"

namespace walkopt {

// Instance file format: one JSON document with keys `meta`, `residents`,
// `candidates`, `amenity_types`, `existing`, `curve`, `d_infinity`,
// `distances`. Distance rows follow the resident array, columns the
// canonical candidate-then-existing order. See README for the full schema.
Instance read_instance(const std::filesystem::path& path);
Instance instance_from_json_text(const std::string& text);
void write_instance(const Instance& instance, const std::filesystem::path& path);
std::string instance_to_json_text(const Instance& instance);

// Allocation files: {"placements": [{"type": id, "node": candidate node id,
// "count": n}, ...]}.
Allocation read_allocation(const std::filesystem::path& path, const Instance& instance);
void write_allocation(const Allocation& alloc, const Instance& instance,
                      const std::filesystem::path& path);

}  // namespace walkopt
