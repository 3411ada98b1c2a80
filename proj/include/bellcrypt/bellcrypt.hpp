#pragma once

// Umbrella header.

#include "bellcrypt/adversary.hpp"
#include "bellcrypt/bell_algebra.hpp"
#include "bellcrypt/config.hpp"
#include "bellcrypt/framework.hpp"
#include "bellcrypt/hooks.hpp"
#include "bellcrypt/identities.hpp"
#include "bellcrypt/protocols.hpp"
#include "bellcrypt/randomness.hpp"
#include "bellcrypt/rational.hpp"
#include "bellcrypt/rng.hpp"
#include "bellcrypt/session.hpp"
#include "bellcrypt/state.hpp"
#include "bellcrypt/transcript.hpp"
