#pragma once

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/mst.hpp"
#include "lightspan/nets.hpp"
#include "lightspan/steiner_trees.hpp"
#include "lightspan/greedy.hpp"
#include "lightspan/planar.hpp"
#include "lightspan/fast_planar.hpp"
#include "lightspan/highdim.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/io.hpp"
#include "lightspan/svg.hpp"
#include "lightspan/run.hpp"
