#include "entroflow/trajectory_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "entroflow/io.hpp"

namespace entroflow {

namespace fs = std::filesystem;

namespace {

std::string snapshot_filename(size_t index, int dim) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06zu.%s", index, dim == 1 ? "txt" : "obj");
    return buf;
}

}  // namespace

void write_trajectory(const std::string& dir, const Trajectory& traj) {
    fs::create_directories(dir);
    const int dim = traj.snapshots.empty() ? 1 : traj.snapshots.front().surface.dim;

    std::ofstream manifest(fs::path(dir) / "manifest.txt");
    if (!manifest) throw IoError("cannot write manifest in " + dir);
    manifest << "format = entroflow-trajectory/1\n";
    manifest << "dimension = " << dim << "\n";
    manifest << "scheme = " << to_string(traj.controls.scheme) << "\n";
    manifest << "cfl = " << format_double(traj.controls.cfl) << "\n";
    manifest << "t_end = " << format_double(traj.controls.t_end) << "\n";
    manifest << "snapshot_every = " << format_double(traj.controls.snapshot_every) << "\n";
    manifest << "remesh_every = " << traj.controls.remesh_every << "\n";
    manifest << "curvature_blowup = " << format_double(traj.controls.curvature_blowup)
             << "\n";
    manifest << "volume_floor = " << format_double(traj.controls.volume_floor) << "\n";
    manifest << "termination = " << to_string(traj.termination) << "\n";
    if (traj.singular_time)
        manifest << "singular_time = " << format_double(*traj.singular_time) << "\n";
    if (traj.singular_point) {
        manifest << "singular_point =";
        for (Eigen::Index i = 0; i < traj.singular_point->size(); ++i)
            manifest << ' ' << format_double((*traj.singular_point)(i));
        manifest << "\n";
    }
    manifest << "total_steps = " << traj.total_steps << "\n";
    manifest << "max_dt = " << format_double(traj.max_dt) << "\n";
    manifest << "min_dt = " << format_double(traj.min_dt) << "\n";
    manifest << "snapshots = " << traj.snapshots.size() << "\n";
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& snap = traj.snapshots[i];
        const std::string file = snapshot_filename(i, dim);
        manifest << "snapshot_" << i << "_time = " << format_double(snap.time) << "\n";
        manifest << "snapshot_" << i << "_step = " << snap.step_count << "\n";
        manifest << "snapshot_" << i << "_epoch = " << snap.epoch << "\n";
        manifest << "snapshot_" << i << "_file = " << file << "\n";
        write_surface((fs::path(dir) / file).string(), snap.surface);
    }
    if (!manifest) throw IoError("failed writing manifest in " + dir);
}

Trajectory read_trajectory(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.txt");
    if (!in) throw IoError("cannot open manifest in " + dir);

    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) {
            const auto eq2 = line.find(" =");
            if (eq2 == std::string::npos) throw IoError("malformed manifest line: " + line);
            kv[line.substr(0, eq2)] = "";
            continue;
        }
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw IoError("manifest missing key: " + key);
        return it->second;
    };

    if (need("format") != "entroflow-trajectory/1")
        throw IoError("unsupported trajectory format");

    Trajectory traj;
    traj.controls.scheme = scheme_from_string(need("scheme"));
    traj.controls.cfl = std::stod(need("cfl"));
    traj.controls.t_end = std::stod(need("t_end"));
    traj.controls.snapshot_every = std::stod(need("snapshot_every"));
    traj.controls.remesh_every = std::stol(need("remesh_every"));
    traj.controls.curvature_blowup = std::stod(need("curvature_blowup"));
    traj.controls.volume_floor = std::stod(need("volume_floor"));
    const std::string term = need("termination");
    if (term == "ReachedTime") traj.termination = Termination::ReachedTime;
    else if (term == "SingularityDetected") traj.termination = Termination::SingularityDetected;
    else if (term == "StepFloor") traj.termination = Termination::StepFloor;
    else throw IoError("unknown termination: " + term);
    if (kv.count("singular_time")) traj.singular_time = std::stod(kv["singular_time"]);
    if (kv.count("singular_point")) {
        std::istringstream iss(kv["singular_point"]);
        std::vector<double> coords;
        double c;
        while (iss >> c) coords.push_back(c);
        Eigen::VectorXd p(static_cast<Eigen::Index>(coords.size()));
        for (size_t i = 0; i < coords.size(); ++i) p(static_cast<Eigen::Index>(i)) = coords[i];
        traj.singular_point = p;
    }
    traj.total_steps = std::stol(need("total_steps"));
    traj.max_dt = std::stod(need("max_dt"));
    traj.min_dt = std::stod(need("min_dt"));

    const size_t count = std::stoul(need("snapshots"));
    traj.snapshots.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        const std::string prefix = "snapshot_" + std::to_string(i) + "_";
        FlowState state;
        state.time = std::stod(need(prefix + "time"));
        state.step_count = std::stol(need(prefix + "step"));
        state.epoch = std::stol(need(prefix + "epoch"));
        state.surface =
            read_surface((fs::path(dir) / need(prefix + "file")).string());
        traj.snapshots.push_back(std::move(state));
    }
    return traj;
}

}  // namespace entroflow
