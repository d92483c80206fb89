#pragma once

// Umbrella header.
#include "treelike/cluster_validity.hpp"
#include "treelike/core_types.hpp"
#include "treelike/distances.hpp"
#include "treelike/hyperbolicity.hpp"
#include "treelike/io.hpp"
#include "treelike/neighbor_joining.hpp"
#include "treelike/preprocess.hpp"
#include "treelike/report.hpp"
#include "treelike/synthetic.hpp"
#include "treelike/ultrametricity.hpp"
#include "treelike/version.hpp"
