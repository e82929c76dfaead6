#include "crowdkit/socialforce/scene.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "crowdkit/common/textio.hpp"

namespace crowdkit {

void Scene::validate() const {
    std::set<std::string> ids;
    for (const auto& a : agents) {
        a.validate();
        if (!a.id.empty() && !ids.insert(a.id).second)
            throw std::invalid_argument("Scene: duplicate agent id '" + a.id + "'");
    }
    for (const auto& o : obstacles) o.validate();
}

void step(Scene& scene, const ModelParams& params) {
    params.validate();
    const std::size_t n = scene.agents.size();
    std::vector<Vec2> forces(n);
    std::vector<Agent> neighbors;
    neighbors.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        neighbors.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) neighbors.push_back(scene.agents[j]);
        const Vec2 f = total_force(scene.agents[i], neighbors, scene.obstacles, params);
        if (!f.finite())
            throw std::runtime_error("step: non-finite force on agent '" + scene.agents[i].id + "'");
        forces[i] = f;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Agent& a = scene.agents[i];
        a.velocity += params.dt * forces[i];
        const double cap = kSpeedCapFactor * a.desired_speed;
        const double speed = norm(a.velocity);
        if (speed > cap) a.velocity = (cap / speed) * a.velocity;
        a.position += params.dt * a.velocity;
    }
}

std::string scene_text(const Scene& scene) {
    std::ostringstream os;
    for (const auto& a : scene.agents)
        os << "agent " << a.id << ' ' << fmt_double(a.position.x) << ' ' << fmt_double(a.position.y)
           << ' ' << fmt_double(a.velocity.x) << ' ' << fmt_double(a.velocity.y) << ' '
           << fmt_double(a.desired_speed) << ' ' << fmt_double(a.goal.x) << ' '
           << fmt_double(a.goal.y) << ' ' << fmt_double(a.radius) << ' '
           << fmt_double(a.relaxation_time) << "\n";
    for (const auto& o : scene.obstacles)
        os << "obstacle " << fmt_double(o.p0.x) << ' ' << fmt_double(o.p0.y) << ' '
           << fmt_double(o.p1.x) << ' ' << fmt_double(o.p1.y) << "\n";
    return os.str();
}

Scene scene_from_lines(const std::vector<std::string>& lines) {
    Scene scene;
    int line_no = 0;
    for (const auto& raw : lines) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const std::string where = " (scene line " + std::to_string(line_no) + ")";
        if (tokens[0] == "agent") {
            if (tokens.size() != 11)
                throw std::runtime_error("agent line needs 10 fields" + where);
            Agent a;
            a.id = tokens[1];
            a.position = {parse_double(tokens[2]), parse_double(tokens[3])};
            a.velocity = {parse_double(tokens[4]), parse_double(tokens[5])};
            a.desired_speed = parse_double(tokens[6]);
            a.goal = {parse_double(tokens[7]), parse_double(tokens[8])};
            a.radius = parse_double(tokens[9]);
            a.relaxation_time = parse_double(tokens[10]);
            scene.agents.push_back(std::move(a));
        } else if (tokens[0] == "obstacle") {
            if (tokens.size() != 5)
                throw std::runtime_error("obstacle line needs 4 fields" + where);
            scene.obstacles.push_back({{parse_double(tokens[1]), parse_double(tokens[2])},
                                       {parse_double(tokens[3]), parse_double(tokens[4])}});
        } else {
            throw std::runtime_error("unknown scene directive '" + tokens[0] + "'" + where);
        }
    }
    scene.validate();
    return scene;
}

Scene read_scene(const std::string& path) { return scene_from_lines(read_lines(path)); }

void write_scene(const std::string& path, const Scene& scene) {
    write_text_file(path, scene_text(scene));
}

}  // namespace crowdkit
