#pragma once

#include "hypojac/errors.hpp"
#include "hypojac/hypo.hpp"
#include "hypojac/measures.hpp"
#include "hypojac/model.hpp"
#include "hypojac/spectral.hpp"
#include "hypojac/symbols.hpp"
