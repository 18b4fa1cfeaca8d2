#pragma once

// Umbrella header: time-aware knowledge graph stores, ontology rule
// validation, the event log, derived views, queries, and the text formats.

#include "chronokg/calendar.hpp"
#include "chronokg/event_log.hpp"
#include "chronokg/format.hpp"
#include "chronokg/graph.hpp"
#include "chronokg/model.hpp"
#include "chronokg/ontology.hpp"
#include "chronokg/query.hpp"
#include "chronokg/serialize.hpp"
#include "chronokg/time_point.hpp"
#include "chronokg/validate.hpp"
#include "chronokg/views.hpp"
