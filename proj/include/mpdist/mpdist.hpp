#pragma once

#include "mpdist/pointcloud.hpp"
#include "mpdist/bifiltration.hpp"
#include "mpdist/persistence.hpp"
#include "mpdist/slicing.hpp"
#include "mpdist/distances.hpp"
#include "mpdist/experiments.hpp"
