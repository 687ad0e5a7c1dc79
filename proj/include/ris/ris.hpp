#pragma once

#include "ris/error.hpp"
#include "ris/rng.hpp"
#include "ris/array_model.hpp"
#include "ris/bessel.hpp"
#include "ris/metrics.hpp"
#include "ris/code_families.hpp"
#include "ris/ga.hpp"
#include "ris/se_sim.hpp"
#include "ris/io.hpp"
#include "ris/reproduce.hpp"
