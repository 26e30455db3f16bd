#pragma once

#include "momentlab/ff_core.hpp"
#include "momentlab/characters.hpp"
#include "momentlab/trace_function.hpp"
#include "momentlab/exp_sums.hpp"
#include "momentlab/trace_fn.hpp"
#include "momentlab/special.hpp"
#include "momentlab/l_values.hpp"
#include "momentlab/hecke.hpp"
#include "momentlab/moments.hpp"
#include "momentlab/identities.hpp"
#include "momentlab/experiments.hpp"
#include "momentlab/io.hpp"
