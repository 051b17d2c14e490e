#pragma once

#include "billiard/scalar.hpp"
#include "billiard/geom.hpp"
#include "billiard/polygon.hpp"
#include "billiard/flow.hpp"
#include "billiard/unfold.hpp"
#include "billiard/periodic.hpp"
#include "billiard/stats.hpp"
#include "billiard/polyio.hpp"
#include "billiard/svg.hpp"
