#ifndef AURALIZE_AURALIZE_HPP
#define AURALIZE_AURALIZE_HPP

// Umbrella header: trajectory-driven binaural room-acoustics rendering.

#include "auralize/acoustics.hpp"
#include "auralize/config.hpp"
#include "auralize/error.hpp"
#include "auralize/geometry.hpp"
#include "auralize/io.hpp"
#include "auralize/localization.hpp"
#include "auralize/pipeline.hpp"
#include "auralize/renderer.hpp"
#include "auralize/toy_scene.hpp"
#include "auralize/trajectory.hpp"
#include "auralize/vec.hpp"

#endif
