#pragma once

#include "dce/config.hpp"
#include "dce/dynamics.hpp"
#include "dce/emission.hpp"
#include "dce/experiments.hpp"
#include "dce/fock.hpp"
#include "dce/linalg.hpp"
#include "dce/mcwf.hpp"
#include "dce/model.hpp"
#include "dce/parallel.hpp"
#include "dce/qfi.hpp"
#include "dce/random.hpp"
#include "dce/serialize.hpp"
#include "dce/spectra.hpp"
#include "dce/stats.hpp"
