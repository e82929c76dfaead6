#pragma once

#include <string>
#include <vector>

#include "crowdkit/socialforce/model.hpp"

namespace crowdkit {

struct Scene {
    std::vector<Agent> agents;
    std::vector<Obstacle> obstacles;

    void validate() const;
};

// One semi-implicit Euler step: forces evaluated on the previous state for
// every agent, then v += f*dt (speed capped at kSpeedCapFactor * v0) and
// x += v*dt. Throws when any force comes out non-finite.
void step(Scene& scene, const ModelParams& params);

// Text form:
//   agent <id> <x> <y> <vx> <vy> <v0> <goal_x> <goal_y> <radius> <tau>
//   obstacle <x0> <y0> <x1> <y1>
// '#' starts a comment.
std::string scene_text(const Scene& scene);
Scene scene_from_lines(const std::vector<std::string>& lines);
Scene read_scene(const std::string& path);
void write_scene(const std::string& path, const Scene& scene);

}  // namespace crowdkit
