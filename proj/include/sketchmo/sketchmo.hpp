#pragma once

#include "sketchmo/bench.hpp"
#include "sketchmo/bvh.hpp"
#include "sketchmo/camera.hpp"
#include "sketchmo/composer.hpp"
#include "sketchmo/dataset.hpp"
#include "sketchmo/evaluator.hpp"
#include "sketchmo/kinematics.hpp"
#include "sketchmo/retrieval.hpp"
#include "sketchmo/session.hpp"
