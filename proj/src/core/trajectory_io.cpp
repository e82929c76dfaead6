#include "crowdkit/core/trajectory_io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "crowdkit/common/textio.hpp"

namespace crowdkit {

namespace {
const char* kHeader = "trajectory_id,t_seconds,x_m,y_m,z_m";
}

TrajectoryFile read_trajectory_file(const std::string& path) {
    const auto lines = read_lines(path);
    TrajectoryFile out;

    std::size_t i = 0;
    for (; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = trim(line.substr(1, eq - 1));
                out.metadata[key] = trim(line.substr(eq + 1));
            }
            continue;
        }
        break;
    }
    if (i >= lines.size() || trim(lines[i]) != kHeader)
        throw std::runtime_error(path + ": missing trajectory header line");
    ++i;

    // Accumulate points per id, preserving first-appearance order of ids.
    std::vector<std::string> order;
    std::map<std::string, std::vector<TrajectoryPoint>> by_id;
    for (; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_char(line, ',');
        if (f.size() != 5) throw std::runtime_error(path + ": bad record '" + line + "'");
        const std::string id = trim(f[0]);
        TrajectoryPoint p;
        p.t = parse_double(trim(f[1]), "t_seconds");
        p.position.x = parse_double(trim(f[2]), "x_m");
        p.position.y = parse_double(trim(f[3]), "y_m");
        p.position.z = parse_double(trim(f[4]), "z_m");
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            order.push_back(id);
            it = by_id.emplace(id, std::vector<TrajectoryPoint>{}).first;
        }
        it->second.push_back(p);
    }

    double rate = 30.0;
    if (auto it = out.metadata.find("frame_rate"); it != out.metadata.end())
        rate = parse_double(it->second, "frame_rate");

    TrajectorySet set(rate);
    for (const auto& id : order) {
        auto pts = by_id[id];
        std::stable_sort(pts.begin(), pts.end(),
                         [](const TrajectoryPoint& a, const TrajectoryPoint& b) { return a.t < b.t; });
        set.add(Trajectory(id, std::move(pts)));
    }
    out.set = std::move(set);
    return out;
}

std::string trajectory_file_text(const TrajectorySet& set,
                                 const std::map<std::string, std::string>& metadata) {
    std::ostringstream os;
    os << "# frame_rate = " << fmt_double(set.frame_rate()) << "\n";
    for (const auto& [k, v] : metadata) {
        if (k == "frame_rate") continue;
        os << "# " << k << " = " << v << "\n";
    }
    os << kHeader << "\n";
    for (const auto& traj : set.trajectories())
        for (const auto& p : traj.points())
            os << traj.id() << ',' << fmt_double(p.t) << ',' << fmt_double(p.position.x) << ','
               << fmt_double(p.position.y) << ',' << fmt_double(p.position.z) << "\n";
    return os.str();
}

void write_trajectory_file(const std::string& path, const TrajectorySet& set,
                           const std::map<std::string, std::string>& metadata) {
    write_text_file(path, trajectory_file_text(set, metadata));
}

}  // namespace crowdkit
