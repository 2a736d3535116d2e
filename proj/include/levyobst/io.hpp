#pragma once

#include <filesystem>
#include <string>

#include "levyobst/jump_sde.hpp"
#include "levyobst/optimal_stopping.hpp"
#include "levyobst/pide_solver.hpp"

namespace levyobst {

/// All numeric output is written with %.17g so that artifacts round-trip
/// bit-exactly.
std::string format_full(double v);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

/// One row per (path, grid time): path,t,x
void export_batch_csv(const PathBatch& batch, const std::filesystem::path& path);

/// Compact replay dump. Little-endian layout:
///   magic "LVOBPATH" (8 bytes), u32 version = 1, u32 reserved = 0,
///   u64 n_paths, u64 n_grid, f64 grid[n_grid], f64 x0, u64 seed,
///   then per path: u64 n_jumps, f64 states[n_grid],
///   f64 (time, mark, state_after) per jump.
void export_batch_binary(const PathBatch& batch, const std::filesystem::path& path);
PathBatch import_batch_binary(const std::filesystem::path& path);

/// t,x,v,std_err,exercise_flag
void export_surface_csv(const ValueSurface& surface, const std::filesystem::path& path);
/// step,t,threshold (per-step critical level; nan when the slice has none)
void export_rule_csv(const ValueSurface& surface, const std::filesystem::path& path);
/// t,x,v,active_flag
void export_pide_csv(const PideSolution& sol, const std::filesystem::path& path);

}  // namespace levyobst
