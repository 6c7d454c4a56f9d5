#pragma once

#include "skewlab/angle.hpp"
#include "skewlab/basins.hpp"
#include "skewlab/cylinder.hpp"
#include "skewlab/error.hpp"
#include "skewlab/fiber.hpp"
#include "skewlab/io.hpp"
#include "skewlab/lyapunov.hpp"
#include "skewlab/measures.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/random.hpp"
#include "skewlab/walks.hpp"
