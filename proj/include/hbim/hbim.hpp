#pragma once

#include "hbim/bimodule.hpp"
#include "hbim/errors.hpp"
#include "hbim/fourier.hpp"
#include "hbim/group.hpp"
#include "hbim/harmonic.hpp"
#include "hbim/io.hpp"
#include "hbim/linalg.hpp"
#include "hbim/poisson.hpp"
#include "hbim/random.hpp"
#include "hbim/rep_theory.hpp"
#include "hbim/report.hpp"
#include "hbim/suite.hpp"
