#pragma once

#include <cstddef>
#include <cstdint>

#include "motionfeas/io.h"

// Built-in synthetic inputs with known scores, shared by selfcheck, the
// tests and the benchmarks.
namespace motionfeas::fixtures {

// Symmetric SMPL-X pose standing on the ground: identity rotations, toes at
// z = 0, COM on the segment between the ankles. Coordinates are multiples
// of 1/64 so every sum involved is exact. With a mesh, each foot is a box
// whose sole rests on the ground.
MotionDocument standing(std::size_t frames = 16, bool with_mesh = true);

// The standing pose thrown as a projectile: every joint follows
// (vx t, 0, z0 + vz t - g t^2 / 2) with the feet clear of the ground.
MotionDocument ballistic(std::size_t frames = 10, double gravity = 9.81);

// 55 joints plus a 10475-vertex, 20908-face mesh with float32-exact values.
MotionDocument smplx_sized(std::size_t frames = 2, std::uint64_t seed = 7);

// Standing pose with a per-index sway; prompt ids cycle over `prompts`.
MotionDocument swaying(std::size_t index, std::size_t prompts = 5, std::size_t frames = 24);

// Closed 12-triangle surface of an axis-aligned cube, one frame.
MeshSequence cube(double size = 1.0);

// Closed UV sphere: (bands - 1) * segments + 2 vertices and
// 2 * segments * (bands - 1) faces. 103 bands of 102 segments give a
// surface of SMPL-X size.
MeshSequence sphere(std::size_t bands, std::size_t segments, double radius = 0.5,
                    std::size_t frames = 1);

// `total_faces` disjoint triangles of which exactly `crossing_pairs` pairs
// pierce each other, repeated over `frames`.
MeshSequence crossing_pairs(std::size_t total_faces = 100, std::size_t crossing_pairs = 5,
                            std::size_t frames = 2);

}  // namespace motionfeas::fixtures
