#pragma once

namespace seqboed {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvSchema = "seqboed-csv-v1";

}  // namespace seqboed
