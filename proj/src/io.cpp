#include "levyobst/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace levyobst {

namespace {

constexpr char kMagic[8] = {'L', 'V', 'O', 'B', 'P', 'A', 'T', 'H'};

template <class T>
void put_raw(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get_raw(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw validation_error("cannot open for writing: " + path.string());
    os << contents;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw validation_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void export_batch_csv(const PathBatch& batch, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "path,t,x\n";
    for (std::int64_t i = 0; i < batch.n_paths; ++i)
        for (std::size_t k = 0; k < batch.grid.size(); ++k)
            os << i << ',' << format_full(batch.grid[k]) << ',' << format_full(batch.state(i, k))
               << '\n';
    write_text_file(path, os.str());
}

void export_batch_binary(const PathBatch& batch, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw validation_error("cannot open for writing: " + path.string());
    os.write(kMagic, 8);
    put_raw<std::uint32_t>(os, 1u);
    put_raw<std::uint32_t>(os, 0u);
    put_raw<std::uint64_t>(os, static_cast<std::uint64_t>(batch.n_paths));
    put_raw<std::uint64_t>(os, static_cast<std::uint64_t>(batch.grid.size()));
    for (double g : batch.grid) put_raw(os, g);
    put_raw(os, batch.x0);
    put_raw<std::uint64_t>(os, batch.seed);
    for (std::int64_t i = 0; i < batch.n_paths; ++i) {
        const std::uint64_t nj =
            batch.jumps.empty() ? 0 : batch.jumps[static_cast<std::size_t>(i)].size();
        put_raw(os, nj);
        for (std::size_t k = 0; k < batch.grid.size(); ++k) put_raw(os, batch.state(i, k));
        if (nj > 0)
            for (const auto& ev : batch.jumps[static_cast<std::size_t>(i)]) {
                put_raw(os, ev.time);
                put_raw(os, ev.mark);
                put_raw(os, ev.state_after);
            }
    }
}

PathBatch import_batch_binary(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw validation_error("cannot open for reading: " + path.string());
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw validation_error("bad path-dump magic in " + path.string());
    const auto version = get_raw<std::uint32_t>(is);
    if (version != 1) throw validation_error("unsupported path-dump version");
    get_raw<std::uint32_t>(is);
    PathBatch batch;
    batch.n_paths = static_cast<std::int64_t>(get_raw<std::uint64_t>(is));
    const auto n_grid = get_raw<std::uint64_t>(is);
    batch.grid.resize(n_grid);
    for (auto& g : batch.grid) g = get_raw<double>(is);
    batch.x0 = get_raw<double>(is);
    batch.seed = get_raw<std::uint64_t>(is);
    batch.states.resize(static_cast<std::size_t>(batch.n_paths) * n_grid);
    batch.jumps.resize(static_cast<std::size_t>(batch.n_paths));
    for (std::int64_t i = 0; i < batch.n_paths; ++i) {
        const auto nj = get_raw<std::uint64_t>(is);
        for (std::size_t k = 0; k < n_grid; ++k)
            batch.states[static_cast<std::size_t>(i) * n_grid + k] = get_raw<double>(is);
        auto& row = batch.jumps[static_cast<std::size_t>(i)];
        row.resize(nj);
        for (auto& ev : row) {
            ev.time = get_raw<double>(is);
            ev.mark = get_raw<double>(is);
            ev.state_after = get_raw<double>(is);
        }
    }
    if (!is) throw validation_error("truncated path dump: " + path.string());
    return batch;
}

void export_surface_csv(const ValueSurface& surface, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "t,x,v,std_err,exercise_flag\n";
    for (std::size_t k = 0; k < surface.t_nodes.size(); ++k)
        for (std::size_t j = 0; j < surface.x_nodes.size(); ++j)
            os << format_full(surface.t_nodes[k]) << ',' << format_full(surface.x_nodes[j]) << ','
               << format_full(surface.values[surface.idx(k, j)]) << ','
               << format_full(surface.std_err[surface.idx(k, j)]) << ','
               << int(surface.exercise[surface.idx(k, j)]) << '\n';
    write_text_file(path, os.str());
}

void export_rule_csv(const ValueSurface& surface, const std::filesystem::path& path) {
    const ExerciseBoundary boundary = exercise_boundary(surface);
    std::ostringstream os;
    os << "step,t,threshold\n";
    for (std::size_t k = 0; k < boundary.slices.size(); ++k) {
        const auto& slice = boundary.slices[k];
        os << k << ',' << format_full(slice.t) << ','
           << (slice.threshold ? format_full(*slice.threshold) : "nan") << '\n';
    }
    write_text_file(path, os.str());
}

void export_pide_csv(const PideSolution& sol, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "t,x,v,active_flag\n";
    for (std::size_t k = 0; k < sol.t_nodes.size(); ++k)
        for (std::size_t j = 0; j < sol.x_nodes.size(); ++j)
            os << format_full(sol.t_nodes[k]) << ',' << format_full(sol.x_nodes[j]) << ','
               << format_full(sol.values[sol.idx(k, j)]) << ',' << int(sol.active[sol.idx(k, j)])
               << '\n';
    write_text_file(path, os.str());
}

}  // namespace levyobst
