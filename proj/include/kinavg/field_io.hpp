#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "kinavg/grid.hpp"
#include "kinavg/velocity.hpp"

namespace kinavg {

// Flat binary container, all integers and floats in the writer's byte order:
//
//   offset  size  field
//   0       8     magic "KINAVGF\0"
//   8       4     u32 format version (1)
//   12      4     u32 endianness marker 0x01020304
//   16      4     u32 kind: 0 space-time field, 1 phase-space data
//   20      4     u32 domain tag: 0 physical, 1 frequency, 2 mixed
//   24      12    i32 d, n_x, n_t (n_t = 1 for phase-space data)
//   36      16    f64 len_x, len_t
//   52      8     u64 node count m (0 for fields)
//   60      ...   phase-space only: u32 measure kind, f64 kappa, f64 scale,
//                 i32 degree, then m records of f64 v_1, v_2, v_3, weight
//   ...     8     u64 sample count
//   ...     8 n   complex64 samples (f32 real, f32 imaginary)
//
// Field samples follow the [x_1]...[x_d][t] layout; phase-space samples are
// the physical values laid out [node][x]. A reader that sees the marker as
// 0x04030201 byte-swaps every scalar.
inline constexpr std::string_view container_magic{"KINAVGF\0", 8};
inline constexpr std::uint32_t container_version = 1;

void write_field(std::ostream& out, const SpaceTimeField& f);
SpaceTimeField read_field(std::istream& in);
void write_phase_space(std::ostream& out, const PhaseSpaceData& f);
PhaseSpaceData read_phase_space(std::istream& in);

void save_field(const std::filesystem::path& path, const SpaceTimeField& f);
SpaceTimeField load_field(const std::filesystem::path& path);
void save_phase_space(const std::filesystem::path& path, const PhaseSpaceData& f);
PhaseSpaceData load_phase_space(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace kinavg
