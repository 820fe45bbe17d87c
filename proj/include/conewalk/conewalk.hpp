#pragma once

#define CONEWALK_VERSION "1.0.0"

#include "conewalk/bartholdi.hpp"
#include "conewalk/errors.hpp"
#include "conewalk/essential.hpp"
#include "conewalk/geometric.hpp"
#include "conewalk/json_io.hpp"
#include "conewalk/spectral.hpp"
#include "conewalk/suffix.hpp"
#include "conewalk/surface.hpp"
#include "conewalk/type_system.hpp"
