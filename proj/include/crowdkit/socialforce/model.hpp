#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace crowdkit {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
inline Vec2& operator+=(Vec2& a, const Vec2& b) { a.x += b.x; a.y += b.y; return a; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& v) { return std::sqrt(v.x * v.x + v.y * v.y); }
inline Vec2 perp_left(const Vec2& v) { return {-v.y, v.x}; }

// v/|v| when v is nonzero, otherwise the fallback.
Vec2 normalized_or(const Vec2& v, const Vec2& fallback);

struct Agent {
    std::string id;
    Vec2 position;
    Vec2 velocity;
    double desired_speed = 1.3;  // m/s
    Vec2 goal;
    double radius = 0.25;           // m
    double relaxation_time = 0.5;   // s

    void validate() const;
};

// Static obstacle: a line segment (a point when p0 == p1). The repulsion
// treats the closest point on it as a zero-velocity, zero-radius agent.
struct Obstacle {
    Vec2 p0;
    Vec2 p1;

    void validate() const;
};

enum class Variant { A, B, C };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// Hard ceiling on agent speed as a multiple of the desired speed.
constexpr double kSpeedCapFactor = 1.3;

struct ModelParams {
    Variant variant = Variant::A;

    // circular (A) and elliptical (B) repulsion: strength [m/s^2], range [m]
    double a = 2.0;
    double b = 0.3;

    // split repulsion (C): deceleration term (n) and evasive term (p)
    double a_n = 1.0;
    double b_n = 1.0;
    double c_n = 1.0;
    double a_p = 1.0;
    double b_p = 1.0;
    double c_p = 1.0;

    // anisotropy floor: weight applied to repulsion from agents directly
    // behind (variants A and B only)
    double lambda = 0.3;

    double dt = 1.0 / 30.0;      // integration step, also the horizon inside
                                 // the elliptical axis
    double v_rel_floor = 0.05;   // m/s, keeps the C exponents finite

    // Comparison mode: flips the sign of the circular exponent so the force
    // grows with distance instead of decaying. Off by default; kept only so
    // the two conventions can be run side by side.
    bool flip_exponent_sign = false;

    void validate() const;
};

bool at_goal(const Agent& agent, double tol = 1e-9);

// (v0 * e - v) / tau with e the unit vector toward the goal; zero once the
// agent stands on its goal.
Vec2 driving_force(const Agent& agent);

// lambda + (1 - lambda) * (1 + cos(phi)) / 2 for phi between the agent's
// motion direction and the line of sight to the other agent.
double anisotropy_weight(double phi, double lambda);

// Semi-minor axis w of the ellipse spanned by d and d - (v_beta - v_alpha)*dt.
double semi_minor_axis(const Agent& alpha, const Agent& beta, double dt);

// Circular repulsion: a * exp((r_alpha + r_beta - |d|) / b) * unit(d), d
// pointing from beta to alpha, times the anisotropy weight. Magnitude capped
// at its contact value once the bodies overlap.
Vec2 repulsive_a(const Agent& alpha, const Agent& beta, const ModelParams& params);

// Elliptical repulsion: a * exp(-w / b) * unit(d) times the anisotropy
// weight, with w the semi-minor axis; same contact cap as repulsive_a.
Vec2 repulsive_b(const Agent& alpha, const Agent& beta, const ModelParams& params);

// Split repulsion: a deceleration term against the walking direction plus an
// evasive term along the perpendicular pointing away from the other agent.
// Not anisotropy-weighted.
Vec2 repulsive_c(const Agent& alpha, const Agent& beta, const ModelParams& params);

// Dispatch on params.variant.
Vec2 pedestrian_force(const Agent& alpha, const Agent& beta, const ModelParams& params);

Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

// Active repulsion variant against the closest obstacle point, treated as a
// zero-velocity zero-radius phantom agent; no anisotropy weighting.
Vec2 obstacle_force(const Agent& alpha, const Obstacle& obstacle, const ModelParams& params);

// driving + sum of pedestrian repulsions + sum of obstacle repulsions.
// neighbors must not contain alpha itself.
Vec2 total_force(const Agent& alpha, const std::vector<Agent>& neighbors,
                 const std::vector<Obstacle>& obstacles, const ModelParams& params);

}  // namespace crowdkit
