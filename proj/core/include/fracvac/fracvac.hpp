#pragma once

#include "fracvac/analysis.hpp"
#include "fracvac/dynamics.hpp"
#include "fracvac/error.hpp"
#include "fracvac/io.hpp"
#include "fracvac/response.hpp"
#include "fracvac/special.hpp"
#include "fracvac/spectrum.hpp"
#include "fracvac/toy_model.hpp"
#include "fracvac/tridiagonal.hpp"
