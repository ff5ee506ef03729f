#pragma once

// Umbrella header: learning conical mixtures of submodular shells and
// applying them to budgeted extractive summarization.

#include "submix/commands.hpp"
#include "submix/errors.hpp"
#include "submix/features.hpp"
#include "submix/learn.hpp"
#include "submix/losses.hpp"
#include "submix/maximize.hpp"
#include "submix/rng.hpp"
#include "submix/serialize.hpp"
#include "submix/set_function.hpp"
#include "submix/shells.hpp"
#include "submix/synth.hpp"
#include "submix/textproc.hpp"
#include "submix/verify.hpp"
