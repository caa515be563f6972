#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bayescp/sequence.hpp"

namespace bayescp {

// One row per position, one column per replica track. Empty cells and
// NaN/NA are missing. A first row containing any other non-numeric cell is
// treated as a header. Throws IngestError (with the 1-based line number)
// on ragged rows, unparseable or infinite values, no data rows, or a track
// without a single observed value.
ObservedSequence parse_csv(std::istream& in);
ObservedSequence read_csv(const std::filesystem::path& path);

// Writes a header row (value, or track1..trackN for replicas) and one
// round-trippable row per position; missing values are empty cells.
void write_csv(std::ostream& out, const ObservedSequence& seq);

}  // namespace bayescp
