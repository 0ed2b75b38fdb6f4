#pragma once

#include "spectral_mazur/error.hpp"
#include "spectral_mazur/gauge.hpp"
#include "spectral_mazur/matnorm.hpp"
#include "spectral_mazur/json_io.hpp"
#include "spectral_mazur/mazur.hpp"
#include "spectral_mazur/entropy.hpp"
#include "spectral_mazur/random.hpp"
#include "spectral_mazur/verify.hpp"
#include "spectral_mazur/suites.hpp"
#include "spectral_mazur/modulus.hpp"
