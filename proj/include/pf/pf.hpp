#pragma once

#include "pf/constants.hpp"
#include "pf/errors.hpp"
#include "pf/field.hpp"
#include "pf/io.hpp"
#include "pf/kinematics.hpp"
#include "pf/relativity.hpp"
#include "pf/spectral.hpp"
