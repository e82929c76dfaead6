#include "crowdkit/socialforce/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace crowdkit {

Vec2 normalized_or(const Vec2& v, const Vec2& fallback) {
    const double n = norm(v);
    if (n > 0.0) return (1.0 / n) * v;
    return fallback;
}

void Agent::validate() const {
    if (!position.finite() || !velocity.finite() || !goal.finite())
        throw std::invalid_argument("Agent: non-finite state");
    if (!(desired_speed > 0.0)) throw std::invalid_argument("Agent: desired_speed must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("Agent: radius must be positive");
    if (!(relaxation_time > 0.0))
        throw std::invalid_argument("Agent: relaxation_time must be positive");
}

void Obstacle::validate() const {
    if (!p0.finite() || !p1.finite()) throw std::invalid_argument("Obstacle: non-finite endpoints");
}

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::A: return "A";
        case Variant::B: return "B";
        case Variant::C: return "C";
    }
    throw std::logic_error("variant_name: unknown variant");
}

Variant variant_from_name(const std::string& name) {
    if (name == "A" || name == "a") return Variant::A;
    if (name == "B" || name == "b") return Variant::B;
    if (name == "C" || name == "c") return Variant::C;
    throw std::invalid_argument("unknown model variant '" + name + "' (expected A, B or C)");
}

void ModelParams::validate() const {
    if (variant == Variant::A || variant == Variant::B) {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("ModelParams: a and b must be positive");
    } else {
        if (!(a_n > 0.0) || !(b_n > 0.0) || !(c_n > 0.0) || !(a_p > 0.0) || !(b_p > 0.0) ||
            !(c_p > 0.0))
            throw std::invalid_argument("ModelParams: all six split-term coefficients must be positive");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("ModelParams: lambda must lie in [0, 1]");
    if (!(dt > 0.0)) throw std::invalid_argument("ModelParams: dt must be positive");
    if (!(v_rel_floor > 0.0)) throw std::invalid_argument("ModelParams: v_rel_floor must be positive");
}

bool at_goal(const Agent& agent, double tol) {
    return norm(agent.goal - agent.position) <= tol;
}

Vec2 driving_force(const Agent& agent) {
    const Vec2 to_goal = agent.goal - agent.position;
    const double dist = norm(to_goal);
    if (dist <= 0.0) return {0.0, 0.0};
    const Vec2 e = (1.0 / dist) * to_goal;
    return (1.0 / agent.relaxation_time) * (agent.desired_speed * e - agent.velocity);
}

double anisotropy_weight(double phi, double lambda) {
    return lambda + (1.0 - lambda) * 0.5 * (1.0 + std::cos(phi));
}

namespace {

// Direction the agent is facing: velocity if moving, else toward the goal,
// else +x so the result is always a unit vector.
Vec2 motion_direction(const Agent& agent) {
    const Vec2 by_goal = normalized_or(agent.goal - agent.position, Vec2{1.0, 0.0});
    return normalized_or(agent.velocity, by_goal);
}

double aniso_toward(const Agent& alpha, const Vec2& other_pos, double lambda) {
    const Vec2 o = other_pos - alpha.position;
    const double d = norm(o);
    double cos_phi = 1.0;
    if (d > 0.0) {
        cos_phi = dot(motion_direction(alpha), o) / d;
        cos_phi = std::clamp(cos_phi, -1.0, 1.0);
    }
    return lambda + (1.0 - lambda) * 0.5 * (1.0 + cos_phi);
}

double semi_minor_from(const Vec2& d, const Vec2& rel_step) {
    const double s = norm(d) + norm(d - rel_step);
    const double radicand = std::max(0.0, s * s - dot(rel_step, rel_step));
    return 0.5 * std::sqrt(radicand);
}

// Circular repulsion against a generic body at other_pos with radius
// other_radius; anisotropy applied by the caller.
Vec2 circular_core(const Agent& alpha, const Vec2& other_pos, double other_radius,
                   const ModelParams& p) {
    const Vec2 d = alpha.position - other_pos;
    const double dist = norm(d);
    const Vec2 dir = normalized_or(d, Vec2{1.0, 0.0});
    const double contact = alpha.radius + other_radius;
    double expo = (contact - std::max(dist, contact)) / p.b;
    if (p.flip_exponent_sign) expo = -expo;
    return (p.a * std::exp(expo)) * dir;
}

Vec2 elliptical_core(const Agent& alpha, const Vec2& other_pos, const Vec2& other_vel,
                     double other_radius, const ModelParams& p) {
    const Vec2 d = alpha.position - other_pos;
    const double dist = norm(d);
    const Vec2 dir = normalized_or(d, Vec2{1.0, 0.0});
    const double contact = alpha.radius + other_radius;
    // Overlapping bodies are pushed as if exactly in contact.
    const Vec2 d_eff = std::max(dist, contact) * dir;
    const double w = semi_minor_from(d_eff, p.dt * (other_vel - alpha.velocity));
    return (p.a * std::exp(-w / p.b)) * dir;
}

Vec2 split_core(const Agent& alpha, const Vec2& other_pos, const Vec2& other_vel,
                const ModelParams& p) {
    const Vec2 o = other_pos - alpha.position;
    const double dist = norm(o);
    const Vec2 o_dir = normalized_or(o, Vec2{1.0, 0.0});

    const Vec2 m = motion_direction(alpha);
    const Vec2 n = -1.0 * m;
    Vec2 pdir = perp_left(m);
    if (dot(pdir, o) > 0.0) pdir = -1.0 * pdir;  // evade away from the other body

    const double cos_theta = std::clamp(dot(m, o_dir), -1.0, 1.0);
    const double theta = std::acos(cos_theta);
    const double v_rel = std::max(norm(other_vel - alpha.velocity), p.v_rel_floor);

    const double f_n = p.a_n * std::exp(-p.b_n * theta * theta / v_rel - p.c_n * dist);
    const double f_p = p.a_p * std::exp(-p.b_p * theta / v_rel - p.c_p * dist);
    return f_n * n + f_p * pdir;
}

}  // namespace

double semi_minor_axis(const Agent& alpha, const Agent& beta, double dt) {
    const Vec2 d = alpha.position - beta.position;
    return semi_minor_from(d, dt * (beta.velocity - alpha.velocity));
}

Vec2 repulsive_a(const Agent& alpha, const Agent& beta, const ModelParams& params) {
    const double w = aniso_toward(alpha, beta.position, params.lambda);
    return w * circular_core(alpha, beta.position, beta.radius, params);
}

Vec2 repulsive_b(const Agent& alpha, const Agent& beta, const ModelParams& params) {
    const double w = aniso_toward(alpha, beta.position, params.lambda);
    return w * elliptical_core(alpha, beta.position, beta.velocity, beta.radius, params);
}

Vec2 repulsive_c(const Agent& alpha, const Agent& beta, const ModelParams& params) {
    return split_core(alpha, beta.position, beta.velocity, params);
}

Vec2 pedestrian_force(const Agent& alpha, const Agent& beta, const ModelParams& params) {
    switch (params.variant) {
        case Variant::A: return repulsive_a(alpha, beta, params);
        case Variant::B: return repulsive_b(alpha, beta, params);
        case Variant::C: return repulsive_c(alpha, beta, params);
    }
    throw std::logic_error("pedestrian_force: unknown variant");
}

Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 <= 0.0) return a;
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return a + t * ab;
}

Vec2 obstacle_force(const Agent& alpha, const Obstacle& obstacle, const ModelParams& params) {
    const Vec2 cp = closest_point_on_segment(alpha.position, obstacle.p0, obstacle.p1);
    switch (params.variant) {
        case Variant::A: return circular_core(alpha, cp, 0.0, params);
        case Variant::B: return elliptical_core(alpha, cp, Vec2{0.0, 0.0}, 0.0, params);
        case Variant::C: return split_core(alpha, cp, Vec2{0.0, 0.0}, params);
    }
    throw std::logic_error("obstacle_force: unknown variant");
}

Vec2 total_force(const Agent& alpha, const std::vector<Agent>& neighbors,
                 const std::vector<Obstacle>& obstacles, const ModelParams& params) {
    Vec2 f = driving_force(alpha);
    for (const auto& beta : neighbors) f += pedestrian_force(alpha, beta, params);
    for (const auto& obs : obstacles) f += obstacle_force(alpha, obs, params);
    return f;
}

}  // namespace crowdkit
