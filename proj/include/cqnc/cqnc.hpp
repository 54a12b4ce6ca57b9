#pragma once

#include "cqnc/config.hpp"
#include "cqnc/constants.hpp"
#include "cqnc/error.hpp"
#include "cqnc/linear_model.hpp"
#include "cqnc/params.hpp"
#include "cqnc/presets.hpp"
#include "cqnc/response.hpp"
#include "cqnc/series_io.hpp"
#include "cqnc/spectra.hpp"
#include "cqnc/sweep.hpp"
#include "cqnc/validate.hpp"
#include "cqnc/version.hpp"
