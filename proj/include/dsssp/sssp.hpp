#pragma once

#include "band.hpp"
#include "combine.hpp"
#include "sparse.hpp"
#include "sssp_params.hpp"
#include "toporder.hpp"
#include "trial.hpp"
