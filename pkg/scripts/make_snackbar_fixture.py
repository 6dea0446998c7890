#!/usr/bin/env python3
"""Regenerates the bundled snack-bar fixture under src/shiftup/fixtures/snackbar.

The fixture mirrors the scale of the original case study: 68 user
stories, 175 acceptance tests, 10 roadmap phases with a DAG of
dependencies, 30 work issues partitioning each phase's tests, a C4
model, 6 ADRs, and labeled prompt logs whose category counts round to
the published percentage distributions. The script is deterministic
and self-checking; it refuses to write a fixture that fails any of
the invariants the test suite later relies on.
"""

from __future__ import annotations

import random
import shutil
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from shiftup.artifacts.model import (  # noqa: E402
    AcceptanceTest,
    ADRecord,
    AdrStatus,
    ArtifactBundle,
    C4Element,
    C4Level,
    C4Model,
    C4Relation,
    Clause,
    ClauseKind,
    IssueStatus,
    PathMapping,
    Requirement,
    RequirementKind,
    RoadmapPhase,
    UserStory,
    WorkIssue,
)
from shiftup.artifacts.store import load_bundle, save_bundle  # noqa: E402
from shiftup.artifacts.validate import validate  # noqa: E402
from shiftup.gwt import GwtFile, lint_gwt  # noqa: E402
from shiftup.metrics import (  # noqa: E402
    Paradigm,
    PromptRecord,
    categorize,
    distribution_report,
    record_prompt,
)

TARGET = REPO / "src" / "shiftup" / "fixtures" / "snackbar"

_KIND = {"g": ClauseKind.GIVEN, "w": ClauseKind.WHEN, "t": ClauseKind.THEN}


# ---------------------------------------------------------------------------
# Requirements
# ---------------------------------------------------------------------------

F = RequirementKind.FUNCTIONAL
N = RequirementKind.NON_FUNCTIONAL

REQUIREMENTS = [
    (F, "Staff accounts sign in with a personal code."),
    (F, "Roles separate admin, kitchen, and owner capabilities."),
    (F, "The menu shows every published item with name, price, and category."),
    (F, "Menu items can be marked sold out without removing them."),
    (F, "Guests can filter the menu by category."),
    (F, "Guests assemble a cart before placing an order."),
    (F, "The cart enforces per-item quantity limits."),
    (F, "Orders receive a sequential pickup number on placement."),
    (F, "Orders capture a contact name for pickup announcements."),
    (F, "Card payments are authorized before an order enters the kitchen queue."),
    (F, "Failed payments leave the cart untouched."),
    (F, "Receipts are issued for every paid order."),
    (F, "The kitchen queue lists paid orders oldest first."),
    (F, "Kitchen staff advance orders through preparing and ready states."),
    (F, "Guests see live status for their active order."),
    (F, "Ready orders trigger a pickup announcement."),
    (F, "Admins create, edit, and retire menu items."),
    (F, "Admins schedule daily specials with start and end times."),
    (F, "Price changes never alter already-placed orders."),
    (F, "Ingredient stock levels decrement as orders are accepted."),
    (F, "Items auto-mark sold out when stock runs out."),
    (F, "Loyalty members earn one point per euro paid."),
    (F, "Accumulated points redeem against future orders."),
    (F, "Owners view daily sales totals and export order history."),
    (N, "The menu page renders within one second on cafe wifi."),
    (N, "The interface stays usable on a phone-sized screen."),
    (N, "Ordering remains available when the kitchen display disconnects."),
    (N, "Card data never touches application storage."),
    (N, "Prices are stored and computed in whole cents."),
    (N, "The kitchen queue refreshes without manual reload."),
    (N, "Daily reports generate within ten seconds."),
    (N, "Every menu change leaves an audit record."),
]


# ---------------------------------------------------------------------------
# Phases, stories, acceptance tests
# ---------------------------------------------------------------------------
# Phase entry: (name, goal, architecture tasks, depends_on, stories).
# Story entry: (as_a, i_want, so_that, requirement refs, tests).
# Test entry: (name, clauses); clause kinds g/w/t, repeats render as And.

PHASES = [
    (
        "Foundations",
        "Accounts, roles, money handling, and a layout that works at the counter.",
        ["Stand up the till API skeleton", "Model staff accounts and sessions"],
        [],
        [
            (
                "staff member",
                "to sign in with my personal code",
                "the till knows who I am",
                ["REQ-1"],
                [
                    (
                        "correct code signs the staff member in",
                        [
                            ("g", "a staff account exists with code 4217"),
                            ("w", "the staff member enters 4217 at the till"),
                            ("t", "the till unlocks"),
                            ("t", "the session shows the staff member's name"),
                        ],
                    ),
                    (
                        "wrong code is rejected",
                        [
                            ("g", "a staff account exists with code 4217"),
                            ("w", "the staff member enters 9999"),
                            ("t", "the till stays locked"),
                            ("t", "a failed attempt is recorded"),
                        ],
                    ),
                    (
                        "three failed codes lock the account",
                        [
                            ("g", "an account has two failed attempts already"),
                            ("w", "a third wrong code is entered"),
                            ("t", "the account is locked for fifteen minutes"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to manage who is on the staff list",
                "leavers lose access immediately",
                ["REQ-1", "REQ-2"],
                [
                    (
                        "owner adds a staff account",
                        [
                            ("g", "the owner is signed in"),
                            ("w", "the owner adds an account for a new hire"),
                            ("t", "the new account appears on the staff list"),
                            ("t", "the account starts with no role"),
                        ],
                    ),
                    (
                        "owner removes a leaver",
                        [
                            ("g", "the staff list contains a leaver's account"),
                            ("w", "the owner removes that account"),
                            ("t", "the account can no longer sign in"),
                        ],
                    ),
                    (
                        "removal ends live sessions",
                        [
                            ("g", "a leaver is signed in at the till"),
                            ("w", "the owner removes the leaver's account"),
                            ("t", "the leaver's session ends within a minute"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to assign a role to each account",
                "kitchen screens stay read-only for the counter crew",
                ["REQ-2"],
                [
                    (
                        "owner grants the kitchen role",
                        [
                            ("g", "an account exists with no role"),
                            ("w", "the owner assigns the kitchen role"),
                            ("t", "the account sees the kitchen queue"),
                        ],
                    ),
                    (
                        "kitchen role cannot edit the menu",
                        [
                            ("g", "an account holds only the kitchen role"),
                            ("w", "that account opens the menu editor"),
                            ("t", "the editor is refused"),
                        ],
                    ),
                    (
                        "role changes are logged",
                        [
                            ("g", "an account holds the kitchen role"),
                            ("w", "the owner swaps it to the admin role"),
                            ("t", "the audit log records both roles by name"),
                        ],
                    ),
                ],
            ),
            (
                "staff member",
                "to be signed out after inactivity",
                "an unattended till is not a risk",
                ["REQ-1"],
                [
                    (
                        "idle session expires",
                        [
                            ("g", "a staff member has been idle for ten minutes"),
                            ("w", "the till checks session age"),
                            ("t", "the staff member is signed out"),
                        ],
                    ),
                    (
                        "activity resets the idle clock",
                        [
                            ("g", "a staff member was idle for nine minutes"),
                            ("w", "the staff member taps any key"),
                            ("t", "the session stays open for another ten minutes"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to run the till in euros with cent precision",
                "totals never drift",
                ["REQ-29"],
                [
                    (
                        "totals are computed in cents",
                        [
                            ("g", "the cart holds items priced 250 cents plus 125 cents"),
                            ("w", "the till computes the total"),
                            ("t", "the total is exactly 375 cents"),
                        ],
                    ),
                    (
                        "display formats cents as euros",
                        [
                            ("g", "an order total of 375 cents"),
                            ("w", "the receipt is rendered"),
                            ("t", "the printed total reads 3.75"),
                        ],
                    ),
                    (
                        "no fractional cents survive rounding",
                        [
                            ("g", "a 10 percent discount applies to 125 cents"),
                            ("w", "the discount is applied"),
                            ("t", "the result is a whole number of cents"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to use the site comfortably on my phone",
                "I can order from the lift queue",
                ["REQ-26"],
                [
                    (
                        "menu fits a narrow viewport",
                        [
                            ("g", "a guest browses on a 360 pixel wide screen"),
                            ("w", "the menu page renders"),
                            ("t", "no horizontal scrolling is needed"),
                        ],
                    ),
                    (
                        "checkout button stays reachable",
                        [
                            ("g", "the cart view is open on a phone"),
                            ("w", "the guest scrolls the item list"),
                            ("t", "the checkout button remains visible"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Menu browsing",
        "Guests can see what exists, what it costs, and what is gone.",
        ["Design the menu read model", "Wire category metadata"],
        ["PH-1"],
        [
            (
                "guest",
                "to browse the published menu",
                "I can decide what to order",
                ["REQ-3"],
                [
                    (
                        "published items are listed",
                        [
                            ("g", "the menu holds three published snacks"),
                            ("w", "a guest opens the menu page"),
                            ("t", "all three snacks appear"),
                            ("t", "each entry shows a name with a price"),
                        ],
                    ),
                    (
                        "unpublished items stay hidden",
                        [
                            ("g", "a draft item exists alongside two published ones"),
                            ("w", "a guest opens the menu page"),
                            ("t", "only the two published items appear"),
                        ],
                    ),
                    (
                        "menu groups items by category",
                        [
                            ("g", "published items span two categories"),
                            ("w", "a guest opens the menu page"),
                            ("t", "each category renders as its own section"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to filter the menu by category",
                "I find drinks quickly",
                ["REQ-5"],
                [
                    (
                        "drink filter shows only drinks",
                        [
                            ("g", "the menu holds two drinks plus four snacks"),
                            ("w", "the guest filters by drinks"),
                            ("t", "exactly the two drinks remain visible"),
                        ],
                    ),
                    (
                        "clearing the filter restores the menu",
                        [
                            ("g", "the drinks filter is active"),
                            ("w", "the guest clears the filter"),
                            ("t", "the full menu is shown again"),
                        ],
                    ),
                    (
                        "empty category explains itself",
                        [
                            ("g", "no published item belongs to the soup category"),
                            ("w", "the guest filters by soups"),
                            ("t", "a message explains the category is empty"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to see sold-out items greyed out instead of hidden",
                "I know what normally exists",
                ["REQ-4"],
                [
                    (
                        "sold out item stays listed",
                        [
                            ("g", "a snack is marked sold out"),
                            ("w", "a guest opens the menu page"),
                            ("t", "the snack is still listed"),
                        ],
                    ),
                    (
                        "sold out item cannot be added",
                        [
                            ("g", "a snack is marked sold out"),
                            ("w", "the guest tries to add it to the cart"),
                            ("t", "the cart refuses with a sold out notice"),
                        ],
                    ),
                    # Deliberate style slip kept for the linter: 'and' in a then clause.
                    (
                        "sold out styling is obvious",
                        [
                            ("g", "a snack is marked sold out"),
                            ("w", "a guest opens the menu page"),
                            ("t", "the item is greyed out and shows a sold out badge"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to see allergy notes on each item",
                "I can order safely",
                ["REQ-3"],
                [
                    (
                        "allergy notes are shown",
                        [
                            ("g", "a waffle lists gluten in its allergy notes"),
                            ("w", "a guest opens the item details"),
                            ("t", "the gluten note is visible"),
                        ],
                    ),
                    (
                        "items without notes show none",
                        [
                            ("g", "a drink has no allergy notes"),
                            ("w", "a guest opens the item details"),
                            ("t", "the allergy section is omitted"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to see the day's special on top",
                "I notice the offer",
                ["REQ-18", "REQ-3"],
                [
                    (
                        "active special leads the menu",
                        [
                            ("g", "a special is scheduled for the current time"),
                            ("w", "a guest opens the menu page"),
                            ("t", "the special renders above all categories"),
                        ],
                    ),
                    (
                        "expired special disappears",
                        [
                            ("g", "a special ended an hour ago"),
                            ("w", "a guest opens the menu page"),
                            ("t", "the special no longer appears"),
                        ],
                    ),
                    (
                        "special shows its discounted price",
                        [
                            ("g", "a 400 cent waffle has a 300 cent special"),
                            ("w", "a guest opens the menu page"),
                            ("t", "the special shows 300 as the current price"),
                            ("t", "the regular price is shown struck through"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "the menu to load fast on cafe wifi",
                "queueing stays short",
                ["REQ-25"],
                [
                    (
                        "menu payload stays small",
                        [
                            ("g", "the full menu holds forty items"),
                            ("w", "the menu endpoint is called"),
                            ("t", "the response body stays under 64 kilobytes"),
                        ],
                    ),
                    (
                        "menu renders within a second",
                        [
                            ("g", "a guest on throttled cafe wifi"),
                            ("w", "the menu page loads"),
                            ("t", "first render completes within one second"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to see prices with VAT included",
                "the total matches what I pay",
                ["REQ-3", "REQ-29"],
                [
                    (
                        "listed price includes VAT",
                        [
                            ("g", "a snack costs 250 cents before VAT at 14 percent"),
                            ("w", "the menu shows the snack"),
                            ("t", "the listed price is the VAT inclusive amount"),
                        ],
                    ),
                    (
                        "checkout total matches the menu",
                        [
                            ("g", "the cart holds one snack listed at 285 cents"),
                            ("w", "the guest reaches checkout"),
                            ("t", "the total equals 285 cents"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Cart and ordering",
        "A cart guests trust, ending in a placed order with a pickup number.",
        ["Model carts separately from orders", "Define the order placement transaction"],
        ["PH-2"],
        [
            (
                "guest",
                "to add items to a cart",
                "I can order several things at once",
                ["REQ-6"],
                [
                    (
                        "adding an item fills the cart",
                        [
                            ("g", "an empty cart"),
                            ("w", "the guest adds a waffle"),
                            ("t", "the cart holds one waffle"),
                        ],
                    ),
                    (
                        "adding twice increments quantity",
                        [
                            ("g", "the cart holds one waffle"),
                            ("w", "the guest adds a waffle again"),
                            ("t", "the cart shows quantity two for waffles"),
                        ],
                    ),
                    (
                        "cart badge counts items",
                        [
                            ("g", "the cart holds three items in total"),
                            ("w", "any page renders"),
                            ("t", "the cart badge reads three"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to change quantities in the cart",
                "mistakes are easy to fix",
                ["REQ-6"],
                [
                    (
                        "quantity can be raised",
                        [
                            ("g", "the cart holds one cocoa"),
                            ("w", "the guest sets the quantity to three"),
                            ("t", "the cart holds three cocoas"),
                        ],
                    ),
                    (
                        "quantity can be lowered",
                        [
                            ("g", "the cart holds three cocoas"),
                            ("w", "the guest sets the quantity to one"),
                            ("t", "the cart holds one cocoa"),
                        ],
                    ),
                    (
                        "zero quantity removes the line",
                        [
                            ("g", "the cart holds one cocoa"),
                            ("w", "the guest sets the quantity to zero"),
                            ("t", "the cocoa line disappears from the cart"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to be stopped at the per-item limit",
                "bulk hoarding is prevented",
                ["REQ-7"],
                [
                    (
                        "limit blocks excessive quantity",
                        [
                            ("g", "waffles carry a per order limit of five"),
                            ("w", "the guest sets the waffle quantity to six"),
                            ("t", "the quantity stays at five"),
                            ("t", "a limit notice is shown"),
                        ],
                    ),
                    (
                        "limit applies across additions",
                        [
                            ("g", "the cart already holds five waffles"),
                            ("w", "the guest adds another waffle"),
                            ("t", "the cart still holds five waffles"),
                        ],
                    ),
                    (
                        "limits are per item, not per cart",
                        [
                            ("g", "the cart holds five waffles"),
                            ("w", "the guest adds two cocoas"),
                            ("t", "the cocoas are accepted"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to remove an item from the cart",
                "second thoughts cost nothing",
                ["REQ-6"],
                [
                    (
                        "line removal keeps the rest",
                        [
                            ("g", "the cart holds a waffle with a cocoa"),
                            ("w", "the guest removes the waffle line"),
                            ("t", "only the cocoa remains"),
                        ],
                    ),
                    (
                        "removing the last line empties the cart",
                        [
                            ("g", "the cart holds a single cocoa"),
                            ("w", "the guest removes that line"),
                            ("t", "the cart shows its empty state"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to see a running total in the cart",
                "there are no surprises at checkout",
                ["REQ-6", "REQ-29"],
                [
                    (
                        "total sums line prices",
                        [
                            ("g", "the cart holds two items at 250 cents each"),
                            ("w", "the cart view renders"),
                            ("t", "the running total reads 500 cents"),
                        ],
                    ),
                    (
                        "total follows quantity changes",
                        [
                            ("g", "the cart total reads 500 cents"),
                            ("w", "the guest drops one 250 cent item"),
                            ("t", "the running total reads 250 cents"),
                        ],
                    ),
                    (
                        "total is recomputed server side",
                        [
                            ("g", "a tampered client reports a 1 cent total"),
                            ("w", "the order is submitted"),
                            ("t", "the server recomputes the true total"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to leave a contact name with my order",
                "I hear my name when it is ready",
                ["REQ-9"],
                [
                    (
                        "contact name is required",
                        [
                            ("g", "a filled cart without a contact name"),
                            ("w", "the guest submits the order"),
                            ("t", "submission is refused until a name is given"),
                        ],
                    ),
                    (
                        "contact name reaches the kitchen",
                        [
                            ("g", "an order placed under the name Jonas"),
                            ("w", "the kitchen opens the order"),
                            ("t", "the ticket shows Jonas"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to get a pickup number when I place an order",
                "I can prove the order is mine",
                ["REQ-8"],
                [
                    (
                        "orders get sequential pickup numbers",
                        [
                            ("g", "the last order was number 41"),
                            ("w", "a new order is placed"),
                            ("t", "the new order is number 42"),
                        ],
                    ),
                    (
                        "pickup numbers reset daily",
                        [
                            ("g", "yesterday ended at order number 173"),
                            ("w", "the first order of today is placed"),
                            ("t", "it receives number 1"),
                        ],
                    ),
                    (
                        "pickup number shown at confirmation",
                        [
                            ("g", "a guest just placed an order"),
                            ("w", "the confirmation page renders"),
                            ("t", "the pickup number is displayed prominently"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "my cart to survive a page reload",
                "flaky wifi does not empty it",
                ["REQ-6", "REQ-26"],
                [
                    (
                        "reload keeps the cart",
                        [
                            ("g", "the cart holds two items"),
                            ("w", "the guest reloads the page"),
                            ("t", "the cart still holds both items"),
                        ],
                    ),
                    (
                        "cart expires overnight",
                        [
                            ("g", "a cart was last touched yesterday"),
                            ("w", "the guest returns today"),
                            ("t", "the cart starts empty"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to be told when an item sells out during checkout",
                "I can adjust instead of failing",
                ["REQ-4", "REQ-6"],
                [
                    (
                        "checkout blocks a sold out line",
                        [
                            ("g", "a cart line sold out after being added"),
                            ("w", "the guest submits the order"),
                            ("t", "checkout halts naming the sold out item"),
                        ],
                    ),
                    (
                        "guest can drop the sold out line",
                        [
                            ("g", "checkout is halted by a sold out waffle"),
                            ("w", "the guest removes the waffle line"),
                            ("t", "the order proceeds with the remaining items"),
                        ],
                    ),
                    # Deliberate second when clause kept for the linter.
                    (
                        "restock during checkout clears the block",
                        [
                            ("g", "checkout is halted by a sold out waffle"),
                            ("w", "the kitchen restocks waffles"),
                            ("w", "the guest retries the submission"),
                            ("t", "the order is accepted"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Payments",
        "Card money in, no card data kept, failures that explain themselves.",
        ["Integrate the hosted payment page", "Define settlement webhooks"],
        ["PH-3"],
        [
            (
                "guest",
                "to pay by card at checkout",
                "I do not need cash on the slope",
                ["REQ-10"],
                [
                    (
                        "successful card payment completes the order",
                        [
                            ("g", "a filled cart at checkout"),
                            ("w", "the card authorization succeeds"),
                            ("t", "the order is placed"),
                            ("t", "the guest sees the pickup number"),
                        ],
                    ),
                    (
                        "payment amount matches the total",
                        [
                            ("g", "a cart totalling 775 cents"),
                            ("w", "the payment is authorized"),
                            ("t", "the charged amount is 775 cents"),
                        ],
                    ),
                    (
                        "payment provider receives no item names",
                        [
                            ("g", "a cart holding a waffle"),
                            ("w", "the payment request is built"),
                            ("t", "the request carries only the amount with an order reference"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to keep my cart when a payment fails",
                "I can simply retry",
                ["REQ-11"],
                [
                    (
                        "declined card keeps the cart",
                        [
                            ("g", "a filled cart at checkout"),
                            ("w", "the card is declined"),
                            ("t", "the cart is unchanged"),
                        ],
                    ),
                    (
                        "declined card places no order",
                        [
                            ("g", "a filled cart at checkout"),
                            ("w", "the card is declined"),
                            ("t", "no order reaches the kitchen queue"),
                        ],
                    ),
                    (
                        "retry after decline succeeds",
                        [
                            ("g", "a previous authorization was declined"),
                            ("w", "the guest retries with a valid card"),
                            ("t", "the order is placed normally"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to get a receipt by email",
                "my expense report has evidence",
                ["REQ-12"],
                [
                    (
                        "receipt mail is sent on payment",
                        [
                            ("g", "an order paid with a receipt email given"),
                            ("w", "the payment settles"),
                            ("t", "a receipt is mailed to that address"),
                        ],
                    ),
                    (
                        "receipt lists every line",
                        [
                            ("g", "a paid order with two lines"),
                            ("w", "the receipt is generated"),
                            ("t", "both lines appear with the grand total"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to never store raw card numbers",
                "an audit cannot find any",
                ["REQ-28"],
                [
                    (
                        "card number never persists",
                        [
                            ("g", "a completed card payment"),
                            ("w", "the database is inspected"),
                            ("t", "no table contains a card number"),
                        ],
                    ),
                    (
                        "logs mask card details",
                        [
                            ("g", "payment debug logging is enabled"),
                            ("w", "a payment is processed"),
                            ("t", "log lines show at most the last four digits"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to see a clear error when my card is declined",
                "I know it is the card, not the shop",
                ["REQ-10", "REQ-11"],
                [
                    (
                        "decline shows the provider reason",
                        [
                            ("g", "a card declined for insufficient funds"),
                            ("w", "the failure page renders"),
                            ("t", "the message names insufficient funds"),
                        ],
                    ),
                    (
                        "decline is not blamed on the shop",
                        [
                            ("g", "a card declined by the provider"),
                            ("w", "the failure page renders"),
                            ("t", "the wording points to the card, not the till"),
                        ],
                    ),
                    (
                        "technical failures read differently",
                        [
                            ("g", "the payment provider times out"),
                            ("w", "the failure page renders"),
                            ("t", "the message asks the guest to try again shortly"),
                        ],
                    ),
                ],
            ),
            (
                "kitchen staff",
                "to only see orders that are fully paid",
                "nobody cooks for free",
                ["REQ-10", "REQ-13"],
                [
                    (
                        "unpaid orders stay out of the queue",
                        [
                            ("g", "an order awaiting authorization"),
                            ("w", "the kitchen queue refreshes"),
                            ("t", "the order is absent"),
                        ],
                    ),
                    (
                        "settlement admits the order to the queue",
                        [
                            ("g", "an order whose payment just settled"),
                            ("w", "the kitchen queue refreshes"),
                            ("t", "the order appears at the tail"),
                        ],
                    ),
                    (
                        "voided payments pull the order",
                        [
                            ("g", "a queued order whose payment is voided"),
                            ("w", "the kitchen queue refreshes"),
                            ("t", "the order is removed with a void marker"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "every payment logged with its order",
                "reconciliation is bookkeeping, not archaeology",
                ["REQ-12"],
                [
                    (
                        "payment log links the order",
                        [
                            ("g", "a settled payment for order 57"),
                            ("w", "the payment log is queried for order 57"),
                            ("t", "exactly one settled entry is returned"),
                        ],
                    ),
                    (
                        "refunds reference the original payment",
                        [
                            ("g", "a refund issued for order 57"),
                            ("w", "the payment log is queried for order 57"),
                            ("t", "the refund entry names the original payment id"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Kitchen workflow",
        "A queue the kitchen can run a lunch rush on.",
        ["Design queue state transitions", "Pick the display refresh mechanism"],
        ["PH-4"],
        [
            (
                "kitchen staff",
                "to see paid orders oldest first",
                "nobody waits longer than needed",
                ["REQ-13"],
                [
                    (
                        "queue sorts by payment time",
                        [
                            ("g", "three paid orders settled in sequence"),
                            ("w", "the kitchen queue renders"),
                            ("t", "the earliest settled order is on top"),
                        ],
                    ),
                    (
                        "new orders join at the tail",
                        [
                            ("g", "a queue of two orders"),
                            ("w", "a third order settles"),
                            ("t", "the third order renders last"),
                        ],
                    ),
                    (
                        "collected orders leave the queue",
                        [
                            ("g", "a queue of three orders"),
                            ("w", "the oldest is marked ready then collected"),
                            ("t", "the queue shows the remaining two"),
                        ],
                    ),
                ],
            ),
            (
                "kitchen staff",
                "to mark an order as preparing",
                "the team sees what is claimed",
                ["REQ-14"],
                [
                    (
                        "claiming moves the order to preparing",
                        [
                            ("g", "a queued order in state placed"),
                            ("w", "a cook taps start on the order"),
                            ("t", "the order shows preparing"),
                            ("t", "the cook's name is attached"),
                        ],
                    ),
                    (
                        "claimed orders show who claimed them",
                        [
                            ("g", "an order claimed by Aino"),
                            ("w", "another kitchen screen renders the queue"),
                            ("t", "the order shows Aino as the cook"),
                        ],
                    ),
                    (
                        "only queued orders can be claimed",
                        [
                            ("g", "an order already in preparing"),
                            ("w", "a second cook taps start"),
                            ("t", "the tap is refused with the current state"),
                        ],
                    ),
                ],
            ),
            (
                "kitchen staff",
                "to mark an order as ready",
                "the counter knows to announce it",
                ["REQ-14", "REQ-16"],
                [
                    (
                        "finishing moves the order to ready",
                        [
                            ("g", "an order in preparing"),
                            ("w", "the cook marks it ready"),
                            ("t", "the order shows ready"),
                        ],
                    ),
                    (
                        "ready orders trigger the announcement",
                        [
                            ("g", "an order just marked ready"),
                            ("w", "the announcement queue is read"),
                            ("t", "it contains the order's pickup number"),
                        ],
                    ),
                    (
                        "ready orders leave the work list",
                        [
                            ("g", "a queue holding one preparing order plus one placed order"),
                            ("w", "the preparing order is marked ready"),
                            ("t", "the work list shows only the placed order"),
                        ],
                    ),
                ],
            ),
            (
                "kitchen staff",
                "to see order items grouped by station",
                "fryer work stays at the fryer",
                ["REQ-13"],
                [
                    (
                        "items group under their station",
                        [
                            ("g", "an order with fries plus a cocoa"),
                            ("w", "the kitchen ticket renders"),
                            ("t", "fries appear under the fryer station"),
                            ("t", "the cocoa appears under the drinks station"),
                        ],
                    ),
                    (
                        "stations with no items are hidden",
                        [
                            ("g", "an order holding only drinks"),
                            ("w", "the kitchen ticket renders"),
                            ("t", "the fryer section is absent"),
                        ],
                    ),
                ],
            ),
            (
                "kitchen staff",
                "the queue to refresh on its own",
                "nobody touches the screen with wet hands",
                ["REQ-30"],
                [
                    (
                        "queue updates without interaction",
                        [
                            ("g", "an open kitchen display"),
                            ("w", "a new order settles"),
                            ("t", "the order appears within five seconds untouched"),
                        ],
                    ),
                    (
                        "refresh preserves scroll position",
                        [
                            ("g", "a kitchen display scrolled mid queue"),
                            ("w", "an automatic refresh lands"),
                            ("t", "the scroll position is unchanged"),
                        ],
                    ),
                ],
            ),
            (
                "kitchen staff",
                "to put an order back to preparing if packed wrong",
                "honest mistakes stay recoverable",
                ["REQ-14"],
                [
                    (
                        "ready order can return to preparing",
                        [
                            ("g", "an order in ready"),
                            ("w", "the cook taps reopen"),
                            ("t", "the order shows preparing again"),
                        ],
                    ),
                    (
                        "reopening cancels the announcement",
                        [
                            ("g", "a ready order already announced"),
                            ("w", "the cook taps reopen"),
                            ("t", "the pickup number leaves the announcement board"),
                        ],
                    ),
                    # Deliberate second when clause kept for the linter.
                    (
                        "reopen then finish announces again",
                        [
                            ("g", "an order in ready"),
                            ("w", "the cook taps reopen"),
                            ("w", "the cook marks it ready again"),
                            ("t", "a fresh announcement is queued"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "ordering to stay alive when the kitchen display drops offline",
                "a dead screen does not close the shop",
                ["REQ-27"],
                [
                    (
                        "orders queue while the display is down",
                        [
                            ("g", "the kitchen display is disconnected"),
                            ("w", "a guest places a paid order"),
                            ("t", "the order is accepted into the queue"),
                        ],
                    ),
                    (
                        "reconnect shows everything missed",
                        [
                            ("g", "two orders settled during an outage"),
                            ("w", "the kitchen display reconnects"),
                            ("t", "both orders render in settlement order"),
                        ],
                    ),
                ],
            ),
            (
                "kitchen staff",
                "to see preparation notes from the guest",
                "special requests are not lost",
                ["REQ-9", "REQ-13"],
                [
                    (
                        "guest note prints on the ticket",
                        [
                            ("g", "an order with the note no whipped cream"),
                            ("w", "the kitchen ticket renders"),
                            ("t", "the note is printed under the item"),
                        ],
                    ),
                    (
                        "empty notes leave no blank box",
                        [
                            ("g", "an order without notes"),
                            ("w", "the kitchen ticket renders"),
                            ("t", "no note section appears"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Order status and pickup",
        "Guests know where their food is without crowding the counter.",
        ["Define the status read model", "Specify the announcement board feed"],
        ["PH-5"],
        [
            (
                "guest",
                "to watch my order move through statuses",
                "I can time my walk to the counter",
                ["REQ-15"],
                [
                    (
                        "status page mirrors the kitchen state",
                        [
                            ("g", "an order in preparing"),
                            ("w", "the guest opens the status page"),
                            ("t", "the page shows preparing"),
                        ],
                    ),
                    (
                        "status page advances to ready",
                        [
                            ("g", "a status page open on a preparing order"),
                            ("w", "the kitchen marks the order ready"),
                            ("t", "the page shows ready within five seconds"),
                        ],
                    ),
                    (
                        "collected orders show a closing state",
                        [
                            ("g", "an order collected ten minutes ago"),
                            ("w", "the guest reopens the status page"),
                            ("t", "the page shows collected without further updates"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to be announced by name when my order is ready",
                "I do not have to hover",
                ["REQ-16", "REQ-9"],
                [
                    (
                        "announcement pairs number with name",
                        [
                            ("g", "order 42 placed under the name Jonas"),
                            ("w", "the order is marked ready"),
                            ("t", "the board shows 42 for Jonas"),
                        ],
                    ),
                    (
                        "names are trimmed for the board",
                        [
                            ("g", "an order under a 40 character name"),
                            ("w", "the announcement renders"),
                            ("t", "the board shows the first 20 characters"),
                        ],
                    ),
                    (
                        "duplicate names disambiguate by number",
                        [
                            ("g", "two ready orders both under the name Emma"),
                            ("w", "the announcement board renders"),
                            ("t", "each Emma line carries its own pickup number"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to see my pickup number on the board",
                "I can read it across the room",
                ["REQ-16", "REQ-8"],
                [
                    (
                        "board lists ready pickup numbers",
                        [
                            ("g", "orders 41 and 42 are ready"),
                            ("w", "the pickup board renders"),
                            ("t", "both numbers are listed"),
                        ],
                    ),
                    (
                        "board uses a large typeface",
                        [
                            ("g", "a ready order on the board"),
                            ("w", "the board renders"),
                            ("t", "numbers render at least 48 pixels tall"),
                        ],
                    ),
                ],
            ),
            (
                "staff member",
                "to flag ready orders nobody collects",
                "cold fries get dealt with",
                ["REQ-15", "REQ-16"],
                [
                    (
                        "unclaimed orders get flagged",
                        [
                            ("g", "an order ready for over ten minutes"),
                            ("w", "the queue sweep runs"),
                            ("t", "the order is flagged unclaimed"),
                        ],
                    ),
                    (
                        "flagged orders alert the counter",
                        [
                            ("g", "an order flagged unclaimed"),
                            ("w", "the counter screen refreshes"),
                            ("t", "the order renders highlighted on top"),
                        ],
                    ),
                    (
                        "collection clears the flag",
                        [
                            ("g", "a flagged order"),
                            ("w", "staff mark it collected"),
                            ("t", "the flag disappears from every screen"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to open my status page by the receipt code",
                "no app install is needed",
                ["REQ-15", "REQ-12"],
                [
                    (
                        "receipt code opens the status page",
                        [
                            ("g", "a receipt carrying status code 7QX2"),
                            ("w", "the guest enters 7QX2 on the lookup page"),
                            ("t", "the matching order status appears"),
                        ],
                    ),
                    (
                        "unknown codes fail politely",
                        [
                            ("g", "no order matches code ZZZZ"),
                            ("w", "a guest enters ZZZZ"),
                            ("t", "the page explains the code was not found"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "to see estimated wait before ordering",
                "I can choose the shorter queue",
                ["REQ-13", "REQ-15"],
                [
                    (
                        "estimate reflects queue depth",
                        [
                            ("g", "six orders sit in the queue"),
                            ("w", "a guest views the menu header"),
                            ("t", "the shown estimate grows with the queue"),
                        ],
                    ),
                    (
                        "empty queue shows minimal wait",
                        [
                            ("g", "the queue is empty"),
                            ("w", "a guest views the menu header"),
                            ("t", "the estimate shows under five minutes"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Menu administration",
        "Admins shape the menu without breaking history.",
        ["Define menu item lifecycle states", "Add the audit write path"],
        ["PH-1"],
        [
            (
                "admin",
                "to create a new menu item",
                "new stock sells the day it arrives",
                ["REQ-17"],
                [
                    (
                        "new item appears after publishing",
                        [
                            ("g", "an admin drafts a new smoothie"),
                            ("w", "the admin publishes it"),
                            ("t", "the smoothie appears on the guest menu"),
                        ],
                    ),
                    (
                        "drafts require name, price, category",
                        [
                            ("g", "a draft missing its price"),
                            ("w", "the admin tries to publish"),
                            ("t", "publishing is refused naming the missing field"),
                        ],
                    ),
                    (
                        "new items start in stock",
                        [
                            ("g", "an admin publishes a new smoothie"),
                            ("w", "a guest opens the menu"),
                            ("t", "the smoothie is orderable immediately"),
                        ],
                    ),
                ],
            ),
            (
                "admin",
                "to edit price plus description",
                "typos do not live forever",
                ["REQ-17"],
                [
                    (
                        "price edits show on the menu",
                        [
                            ("g", "a published waffle at 400 cents"),
                            ("w", "the admin reprices it to 450 cents"),
                            ("t", "the menu shows 450 cents"),
                        ],
                    ),
                    (
                        "description edits show on details",
                        [
                            ("g", "a waffle described as plain"),
                            ("w", "the admin rewrites the description"),
                            ("t", "the item details show the new text"),
                        ],
                    ),
                    (
                        "edits require the admin role",
                        [
                            ("g", "a kitchen account opens an item"),
                            ("w", "it attempts a price edit"),
                            ("t", "the edit is refused"),
                        ],
                    ),
                ],
            ),
            (
                "admin",
                "to retire an item without deleting history",
                "old receipts still make sense",
                ["REQ-17"],
                [
                    (
                        "retired items leave the menu",
                        [
                            ("g", "a published pretzel"),
                            ("w", "the admin retires it"),
                            ("t", "the pretzel no longer renders for guests"),
                        ],
                    ),
                    (
                        "old receipts keep retired items",
                        [
                            ("g", "a receipt containing the pretzel"),
                            ("w", "the pretzel is retired"),
                            ("t", "the receipt still shows the pretzel line"),
                        ],
                    ),
                ],
            ),
            (
                "admin",
                "to schedule a daily special with start plus end times",
                "promotions run themselves",
                ["REQ-18"],
                [
                    (
                        "future special stays dormant",
                        [
                            ("g", "a special scheduled to start tomorrow"),
                            ("w", "a guest opens the menu today"),
                            ("t", "the special is absent"),
                        ],
                    ),
                    (
                        "special activates on schedule",
                        [
                            ("g", "a special starting at noon"),
                            ("w", "the clock passes noon"),
                            ("t", "the special renders on the menu"),
                        ],
                    ),
                    (
                        "overlapping specials are refused",
                        [
                            ("g", "a special already covers lunchtime"),
                            ("w", "the admin schedules another for the same item at lunch"),
                            ("t", "the scheduler refuses with the conflict shown"),
                        ],
                    ),
                ],
            ),
            (
                "admin",
                "price changes to leave existing orders untouched",
                "nobody is rebilled",
                ["REQ-19"],
                [
                    (
                        "placed orders keep their prices",
                        [
                            ("g", "an order placed at 400 cents per waffle"),
                            ("w", "the admin reprices waffles to 450 cents"),
                            ("t", "the order total is unchanged"),
                        ],
                    ),
                    (
                        "receipts reprint with original prices",
                        [
                            ("g", "an order from before a reprice"),
                            ("w", "its receipt is reprinted"),
                            ("t", "the printed prices match the order date"),
                        ],
                    ),
                    (
                        "only new carts see the new price",
                        [
                            ("g", "an unsubmitted cart from before the reprice"),
                            ("w", "the guest reaches checkout"),
                            ("t", "the checkout total uses the current price"),
                        ],
                    ),
                ],
            ),
            (
                "admin",
                "an audit entry for every menu change",
                "disputes end with the log",
                ["REQ-32"],
                [
                    (
                        "every menu edit writes an audit row",
                        [
                            ("g", "auditing is enabled"),
                            ("w", "a price edit is saved"),
                            ("t", "an audit row records who changed what"),
                        ],
                    ),
                    (
                        "audit rows are immutable",
                        [
                            ("g", "an existing audit row"),
                            ("w", "an admin attempts to edit it"),
                            ("t", "the attempt is refused"),
                        ],
                    ),
                ],
            ),
            (
                "admin",
                "to preview the menu as guests see it",
                "mistakes are caught before lunch",
                ["REQ-17", "REQ-3"],
                [
                    (
                        "preview matches the guest menu",
                        [
                            ("g", "an admin with unpublished drafts"),
                            ("w", "the admin opens guest preview"),
                            ("t", "the preview hides the drafts"),
                        ],
                    ),
                    (
                        "preview banner prevents confusion",
                        [
                            ("g", "an admin in guest preview"),
                            ("w", "the preview renders"),
                            ("t", "a banner marks the view as preview"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Inventory and availability",
        "Stock truth drives what guests can order.",
        ["Model the stock ledger", "Hook drawdown into order acceptance"],
        ["PH-7"],
        [
            (
                "kitchen staff",
                "to record ingredient stock at opening",
                "the day starts from the truth",
                ["REQ-20"],
                [
                    (
                        "opening counts set the day's stock",
                        [
                            ("g", "the fryer had 80 portions at close"),
                            ("w", "staff record 100 portions at opening"),
                            ("t", "the stock ledger shows 100"),
                        ],
                    ),
                    # Deliberate repeated given clause kept for the linter.
                    (
                        "opening counts overwrite leftovers",
                        [
                            ("g", "yesterday closed with 12 waffle portions"),
                            ("g", "yesterday closed with 12 waffle portions"),
                            ("w", "staff record 30 portions at opening"),
                            ("t", "the ledger shows exactly 30"),
                        ],
                    ),
                    (
                        "missing opening count warns at first sale",
                        [
                            ("g", "no opening count was recorded for fries"),
                            ("w", "the first fries order is accepted"),
                            ("t", "a missing count warning reaches the admin"),
                        ],
                    ),
                ],
            ),
            (
                "kitchen staff",
                "stock to decrement as orders are accepted",
                "the count stays honest",
                ["REQ-20"],
                [
                    (
                        "accepted orders draw down stock",
                        [
                            ("g", "waffle stock stands at 30"),
                            ("w", "an order with two waffles is accepted"),
                            ("t", "waffle stock stands at 28"),
                        ],
                    ),
                    (
                        "declined payments draw nothing",
                        [
                            ("g", "waffle stock stands at 30"),
                            ("w", "an order with two waffles fails payment"),
                            ("t", "waffle stock remains 30"),
                        ],
                    ),
                    (
                        "voided orders restock their items",
                        [
                            ("g", "an accepted order drew two waffles"),
                            ("w", "staff void the order"),
                            ("t", "the two portions return to stock"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "items to vanish to sold out when stock runs dry",
                "I never order a ghost",
                ["REQ-21", "REQ-4"],
                [
                    (
                        "zero stock marks the item sold out",
                        [
                            ("g", "waffle stock stands at 1"),
                            ("w", "an order takes the last waffle"),
                            ("t", "waffles flip to sold out on the menu"),
                        ],
                    ),
                    (
                        "sold out flip is immediate",
                        [
                            ("g", "two guests view waffles in stock"),
                            ("w", "the first guest buys the last portion"),
                            ("t", "the second guest's add attempt is refused"),
                        ],
                    ),
                    (
                        "negative stock is impossible",
                        [
                            ("g", "waffle stock stands at 1"),
                            ("w", "two orders for a waffle race"),
                            ("t", "exactly one order is accepted"),
                        ],
                    ),
                ],
            ),
            (
                "admin",
                "to set low-stock warnings per item",
                "the fryer never runs out mid-rush",
                ["REQ-20"],
                [
                    (
                        "crossing the threshold alerts staff",
                        [
                            ("g", "fries warn at 10 portions"),
                            ("w", "stock drops from 11 to 9"),
                            ("t", "a low stock alert is raised once"),
                        ],
                    ),
                    (
                        "thresholds are per item",
                        [
                            ("g", "fries warn at 10 while cocoa warns at 4"),
                            ("w", "cocoa drops to 9"),
                            ("t", "no cocoa alert is raised"),
                        ],
                    ),
                ],
            ),
            (
                "admin",
                "to restock an item during the day",
                "sold out is not forever",
                ["REQ-21", "REQ-20"],
                [
                    (
                        "restock lifts the sold out flag",
                        [
                            ("g", "waffles are sold out"),
                            ("w", "staff restock 20 portions"),
                            ("t", "waffles are orderable again"),
                        ],
                    ),
                    (
                        "restock adds to remaining stock",
                        [
                            ("g", "fries stand at 3 portions"),
                            ("w", "staff restock 20 portions"),
                            ("t", "fries stand at 23"),
                        ],
                    ),
                    (
                        "restock is recorded with its author",
                        [
                            ("g", "a signed in staff member"),
                            ("w", "they restock waffles"),
                            ("t", "the ledger entry names that staff member"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to review waste counts at closing",
                "tomorrow's order list is informed",
                ["REQ-20"],
                [
                    (
                        "closing counts compute waste",
                        [
                            ("g", "30 portions opened and 22 were sold"),
                            ("w", "staff record 5 portions left at close"),
                            ("t", "the waste count shows 3"),
                        ],
                    ),
                    (
                        "waste report lists by item",
                        [
                            ("g", "waste was recorded for two items"),
                            ("w", "the owner opens the waste report"),
                            ("t", "each item shows its own waste line"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Loyalty and receipts",
        "Points that earn, redeem, and reconcile to the cent.",
        ["Model the points ledger", "Extend receipts with loyalty lines"],
        ["PH-5"],
        [
            (
                "guest",
                "to join the loyalty program at checkout",
                "points start with the first coffee",
                ["REQ-22"],
                [
                    (
                        "joining creates a member id",
                        [
                            ("g", "a guest without a loyalty account"),
                            ("w", "the guest joins at checkout"),
                            ("t", "a member id is issued before payment"),
                        ],
                    ),
                    (
                        "joining is optional",
                        [
                            ("g", "a guest without a loyalty account"),
                            ("w", "the guest skips the loyalty step"),
                            ("t", "checkout proceeds normally"),
                        ],
                    ),
                    (
                        "existing members are recognized",
                        [
                            ("g", "a member id 5012 exists for the guest"),
                            ("w", "the guest enters the id at checkout"),
                            ("t", "the order is linked to member 5012"),
                        ],
                    ),
                ],
            ),
            (
                "loyalty member",
                "to earn one point per euro paid",
                "loyalty feels automatic",
                ["REQ-22"],
                [
                    (
                        "points equal whole euros paid",
                        [
                            ("g", "a member pays 775 cents"),
                            ("w", "the payment settles"),
                            ("t", "7 points are credited"),
                        ],
                    ),
                    (
                        "sub-euro orders earn nothing",
                        [
                            ("g", "a member pays 90 cents"),
                            ("w", "the payment settles"),
                            ("t", "no points are credited"),
                        ],
                    ),
                    (
                        "points post after settlement only",
                        [
                            ("g", "a member order awaiting authorization"),
                            ("w", "the balance is read"),
                            ("t", "the pending order grants no points yet"),
                        ],
                    ),
                ],
            ),
            (
                "loyalty member",
                "to redeem points against an order",
                "saved points buy real waffles",
                ["REQ-23"],
                [
                    (
                        "redemption reduces the total",
                        [
                            ("g", "a member holds 50 points worth 500 cents"),
                            ("w", "the member redeems 30 points at checkout"),
                            ("t", "the total drops by 300 cents"),
                        ],
                    ),
                    (
                        "balance falls by the redeemed amount",
                        [
                            ("g", "a member holds 50 points"),
                            ("w", "30 points are redeemed"),
                            ("t", "the balance shows 20 points"),
                        ],
                    ),
                    (
                        "redemption cannot exceed the balance",
                        [
                            ("g", "a member holds 10 points"),
                            ("w", "the member tries to redeem 30"),
                            ("t", "the redemption is capped at 10"),
                        ],
                    ),
                ],
            ),
            (
                "loyalty member",
                "to see my point balance on the receipt",
                "I do not need another app",
                ["REQ-22", "REQ-12"],
                [
                    (
                        "receipt shows the new balance",
                        [
                            ("g", "a member ends the order with 27 points"),
                            ("w", "the receipt prints"),
                            ("t", "the receipt shows 27 points"),
                        ],
                    ),
                    (
                        "non-members see no loyalty block",
                        [
                            ("g", "an order without a member id"),
                            ("w", "the receipt prints"),
                            ("t", "no loyalty section appears"),
                        ],
                    ),
                ],
            ),
            (
                "guest",
                "a replacement receipt reissued",
                "a lost slip is not a lost refund",
                ["REQ-12"],
                [
                    (
                        "receipts reissue by order number",
                        [
                            ("g", "a paid order number 57"),
                            ("w", "staff reissue the receipt"),
                            ("t", "an identical receipt is produced"),
                        ],
                    ),
                    (
                        "reissues are marked as copies",
                        [
                            ("g", "a reissued receipt"),
                            ("w", "it prints"),
                            ("t", "the footer reads duplicate copy"),
                        ],
                    ),
                ],
            ),
            (
                "loyalty member",
                "redemptions to round in whole cents",
                "the till agrees with my bank",
                ["REQ-23", "REQ-29"],
                [
                    (
                        "point value converts in whole cents",
                        [
                            ("g", "points convert at 10 cents per point"),
                            ("w", "7 points are redeemed"),
                            ("t", "exactly 70 cents are deducted"),
                        ],
                    ),
                    (
                        "redemption never splits a cent",
                        [
                            ("g", "any redemption amount"),
                            ("w", "the discount is applied"),
                            ("t", "the resulting total is a whole cent amount"),
                        ],
                    ),
                ],
            ),
        ],
    ),
    (
        "Reporting and insights",
        "The owner sees what sold, what was promised, and what it cost.",
        ["Design report aggregations", "Pick the export format"],
        ["PH-8", "PH-9"],
        [
            (
                "owner",
                "to see daily sales totals by category",
                "I know what actually sells",
                ["REQ-24"],
                [
                    (
                        "daily totals sum settled orders",
                        [
                            ("g", "three settled orders today totalling 2100 cents"),
                            ("w", "the owner opens the daily report"),
                            ("t", "the grand total reads 2100 cents"),
                        ],
                    ),
                    (
                        "totals group by category",
                        [
                            ("g", "today's sales span drinks and snacks"),
                            ("w", "the daily report renders"),
                            ("t", "each category shows its own subtotal"),
                        ],
                    ),
                    (
                        "refunds subtract from totals",
                        [
                            ("g", "a 300 cent refund was issued today"),
                            ("w", "the daily report renders"),
                            ("t", "the grand total is reduced by 300 cents"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to export order history for a date range",
                "the accountant stops phoning me",
                ["REQ-24"],
                [
                    (
                        "export covers the chosen range",
                        [
                            ("g", "orders exist across three weeks"),
                            ("w", "the owner exports one week"),
                            ("t", "the file holds only that week's orders"),
                        ],
                    ),
                    (
                        "export parses as CSV",
                        [
                            ("g", "an export of ten orders"),
                            ("w", "the file is parsed as CSV"),
                            ("t", "every row has the same column count"),
                        ],
                    ),
                    (
                        "export includes refund rows",
                        [
                            ("g", "a refunded order inside the range"),
                            ("w", "the export runs"),
                            ("t", "the refund appears as its own row"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "reports to finish within ten seconds",
                "a rush-hour glance is enough",
                ["REQ-31"],
                [
                    (
                        "a month of data reports quickly",
                        [
                            ("g", "a month holding ten thousand orders"),
                            ("w", "the daily report is requested"),
                            ("t", "the report returns within ten seconds"),
                        ],
                    ),
                    (
                        "slow reports surface progress",
                        [
                            ("g", "a report running over two seconds"),
                            ("w", "the owner waits"),
                            ("t", "a progress indicator is shown"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to compare specials against regular sales",
                "promotions prove themselves",
                ["REQ-24", "REQ-18"],
                [
                    (
                        "special sales are tallied separately",
                        [
                            ("g", "a special sold 14 units today"),
                            ("w", "the specials report renders"),
                            ("t", "the special line shows 14 units"),
                        ],
                    ),
                    (
                        "comparison shows the regular baseline",
                        [
                            ("g", "the item sold 9 units last week without a special"),
                            ("w", "the specials report renders"),
                            ("t", "the baseline of 9 renders beside the special"),
                        ],
                    ),
                    (
                        "report names the special's window",
                        [
                            ("g", "a special ran from noon to two"),
                            ("w", "the specials report renders"),
                            ("t", "the window noon to two is printed"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to see loyalty liability outstanding",
                "points on the books are not a surprise",
                ["REQ-24", "REQ-22"],
                [
                    (
                        "liability sums outstanding points",
                        [
                            ("g", "members hold 1200 points in total"),
                            ("w", "the liability report renders"),
                            ("t", "the liability reads 12000 cents"),
                        ],
                    ),
                    (
                        "redeemed points leave the liability",
                        [
                            ("g", "200 points were redeemed today"),
                            ("w", "the liability report renders"),
                            ("t", "those points no longer count"),
                        ],
                    ),
                ],
            ),
            (
                "owner",
                "to see peak-hour load per station",
                "staffing follows the data",
                ["REQ-24", "REQ-13"],
                [
                    (
                        "load chart buckets orders by hour",
                        [
                            ("g", "today's orders cluster at noon"),
                            ("w", "the load chart renders"),
                            ("t", "the noon bucket is the tallest"),
                        ],
                    ),
                    (
                        "stations show separate load lines",
                        [
                            ("g", "fryer items dominate the rush"),
                            ("w", "the load chart renders"),
                            ("t", "the fryer line exceeds the drinks line"),
                        ],
                    ),
                ],
            ),
        ],
    ),
]

GWT_FILES = [
    "01-foundations.gwt",
    "02-menu.gwt",
    "03-ordering.gwt",
    "04-payments.gwt",
    "05-kitchen.gwt",
    "06-pickup.gwt",
    "07-admin.gwt",
    "08-inventory.gwt",
    "09-loyalty.gwt",
    "10-reporting.gwt",
]

# Issues: (title, description, story numbers covered). Constraint test ids
# are derived as the union of the named stories' tests.
ISSUES = [
    ("Staff sign-in with idle timeout",
     "Personal-code sign-in, lockout after repeated failures, idle expiry.", [1, 4]),
    ("Staff accounts and role assignment",
     "Owner-managed staff list with role grants and audit of role changes.", [2, 3]),
    ("Cent precision and phone layout",
     "All money in integer cents; core pages usable at 360 pixels.", [5, 6]),
    ("Menu listing and category filter",
     "Published-only menu with category sections and a working filter.", [7, 8]),
    ("Sold-out display, allergy notes, specials",
     "Grey out sold-out items, show allergy notes, surface the active special.", [9, 10, 11]),
    ("Menu performance and VAT pricing",
     "Small payloads, sub-second render, VAT-inclusive prices everywhere.", [12, 13]),
    ("Cart basics",
     "Add items, adjust quantities, keep an honest badge count.", [14, 15]),
    ("Quantity limits, removal, running total",
     "Per-item limits, line removal, server-verified running totals.", [16, 17, 18]),
    ("Order placement details",
     "Contact names, sequential daily pickup numbers, carts that survive reloads.", [19, 20, 21]),
    ("Sell-out handling at checkout",
     "Checkout blocks, explains, and recovers when a line sells out.", [22]),
    ("Card payment happy path and declines",
     "Hosted-page authorization; declines keep the cart intact.", [23, 24]),
    ("Receipts, card data hygiene, decline messages",
     "Email receipts, masked card data, failure pages that blame the right party.", [25, 26, 27]),
    ("Paid-only kitchen queue and payment log",
     "Only settled orders queue; every payment and refund is queryable.", [28, 29]),
    ("Queue ordering and state advance",
     "Oldest-first queue with claim and ready transitions.", [30, 31, 32]),
    ("Stations, auto refresh, reopen flow",
     "Station grouping, hands-free refresh, reopening mispacked orders.", [33, 34, 35]),
    ("Outage tolerance and prep notes",
     "Ordering survives display outages; guest notes reach the ticket.", [36, 37]),
    ("Live status and announcements",
     "Status pages track the kitchen; ready orders announce by name and number.", [38, 39, 40]),
    ("Unclaimed orders, lookup codes, wait estimates",
     "Flag cold orders, resolve receipt codes, estimate the wait honestly.", [41, 42, 43]),
    ("Menu item lifecycle",
     "Create, edit, and retire items without losing order history.", [44, 45, 46]),
    ("Specials scheduling and price isolation",
     "Timed specials; placed orders never feel a reprice.", [47, 48]),
    ("Menu audit and guest preview",
     "Immutable audit rows and a faithful guest preview.", [49, 50]),
    ("Opening stock and drawdown",
     "Opening counts seed the ledger; accepted orders draw it down.", [51, 52]),
    ("Sold-out automation and low-stock alerts",
     "Zero stock flips items to sold out; thresholds alert the kitchen.", [53, 54]),
    ("Restocking and waste tracking",
     "Mid-day restocks reopen items; closing counts produce waste lines.", [55, 56]),
    ("Loyalty enrollment and earning",
     "Optional enrollment at checkout; one point per settled euro.", [57, 58]),
    ("Point redemption in whole cents",
     "Redemption math that never splits a cent or overdraws a balance.", [59, 62]),
    ("Receipt balances and reissue",
     "Balances print on receipts; duplicates reissue by order number.", [60, 61]),
    ("Daily sales and specials comparison",
     "Category subtotals, refund-aware totals, specials vs baseline.", [63, 66]),
    ("History export within time budget",
     "Range-bounded CSV exports; reports stay inside ten seconds.", [64, 65]),
    ("Liability and load reporting",
     "Outstanding points as money; per-station load by hour.", [67, 68]),
]

ADRS = [
    ADRecord(
        id="ADR-0001",
        title="One shared till database",
        status=AdrStatus.ACCEPTED,
        date="2025-02-10",
        context=(
            "The snack bar runs one till, one kitchen display, and a guest "
            "web app, all on the same premises network. Traffic peaks at a "
            "few orders per minute during the lunch rush."
        ),
        decision=(
            "All components read and write one SQLite database owned by the "
            "till API. No component talks to storage directly; everything "
            "goes through the API."
        ),
        consequences=(
            "Backups are one file copy. Horizontal scaling is off the table, "
            "which is acceptable at one location. A second location would "
            "force revisiting this record."
        ),
    ),
    ADRecord(
        id="ADR-0002",
        title="Prices in integer cents",
        status=AdrStatus.ACCEPTED,
        date="2025-02-11",
        context=(
            "Floating point money already produced a one-cent drift in an "
            "early prototype receipt. VAT, discounts, and loyalty redemption "
            "all multiply prices."
        ),
        decision=(
            "Every stored or computed amount is an integer number of cents. "
            "Rendering to euros happens only at the display edge."
        ),
        consequences=(
            "Rounding happens exactly once per computation, at a documented "
            "point. All price fixtures in tests are written in cents."
        ),
    ),
    ADRecord(
        id="ADR-0003",
        title="Kitchen display polls the queue",
        status=AdrStatus.SUPERSEDED,
        date="2025-02-18",
        context=(
            "The kitchen display must reflect new paid orders without manual "
            "refreshing. The simplest mechanism available first was polling "
            "the queue endpoint."
        ),
        decision=(
            "The display polls the queue every five seconds with an "
            "If-Modified-Since header to keep responses cheap."
        ),
        consequences=(
            "Up to five seconds of staleness, visible churn in access logs. "
            "Accepted as a stopgap until a push mechanism is chosen."
        ),
    ),
    ADRecord(
        id="ADR-0004",
        title="Hosted provider page for card payments",
        status=AdrStatus.ACCEPTED,
        date="2025-03-01",
        context=(
            "Taking card numbers on our own pages would pull the whole till "
            "into card-data compliance scope. The shop has no staff for that "
            "kind of audit."
        ),
        decision=(
            "Checkout redirects to the provider's hosted payment page; the "
            "till only ever sees an opaque authorization token and the "
            "settlement webhook."
        ),
        consequences=(
            "No card data ever enters our storage or logs, satisfying the "
            "no-storage requirement by construction. The provider's page "
            "styling is not ours to control."
        ),
    ),
    ADRecord(
        id="ADR-0005",
        title="Server pushed events for the kitchen queue",
        status=AdrStatus.ACCEPTED,
        date="2025-03-15",
        supersedes="ADR-0003",
        context=(
            "Polling produced five-second staleness and noisy logs, and the "
            "kitchen asked for faster turnaround during the rush."
        ),
        decision=(
            "The queue endpoint gains a server-sent event stream; the "
            "display subscribes once and receives queue deltas as they "
            "settle. Polling remains as the reconnect fallback."
        ),
        consequences=(
            "Sub-second queue updates. One long-lived connection per display "
            "to account for in the API worker budget. Supersedes ADR-0003."
        ),
    ),
    ADRecord(
        id="ADR-0006",
        title="Loyalty points as order line items",
        status=AdrStatus.PROPOSED,
        date="2025-04-02",
        context=(
            "Redeemed points reduce an order's total. Bolting the reduction "
            "onto the total directly would bypass the cent-precision rules "
            "that line items already follow."
        ),
        decision=(
            "Represent a redemption as a negative-priced line item on the "
            "order, valued in whole cents, so receipts, reports, and refunds "
            "treat it like any other line."
        ),
        consequences=(
            "Reports show redemptions without special cases. Line items must "
            "tolerate negative prices, which widens a few validations."
        ),
    ),
]

C4_ELEMENTS = [
    C4Element("snackbar", "Snack bar ordering", C4Level.CONTEXT, None,
              "Guests order and pay; the kitchen cooks against a live queue."),
    C4Element("web", "Guest web app", C4Level.CONTAINER, "snackbar",
              "Menu, cart, checkout, and order status pages for guests."),
    C4Element("api", "Till API", C4Level.CONTAINER, "snackbar",
              "The single writer for orders, stock, loyalty, and reports."),
    C4Element("db", "Till database", C4Level.CONTAINER, "snackbar",
              "SQLite file holding all persistent till state."),
    C4Element("display", "Kitchen display", C4Level.CONTAINER, "snackbar",
              "Wall screen rendering the work queue and announcements."),
    C4Element("api-menu", "Menu", C4Level.COMPONENT, "api",
              "Published menu read model, categories, specials."),
    C4Element("api-orders", "Orders", C4Level.COMPONENT, "api",
              "Carts, order placement, pickup numbers, order states."),
    C4Element("api-payments", "Payments", C4Level.COMPONENT, "api",
              "Hosted-page authorization, settlement webhooks, refunds."),
    C4Element("api-kitchen", "Kitchen", C4Level.COMPONENT, "api",
              "Queue feed, station grouping, announcements."),
    C4Element("api-loyalty", "Loyalty", C4Level.COMPONENT, "api",
              "Member ids, point earning, whole-cent redemption."),
    C4Element("api-reports", "Reports", C4Level.COMPONENT, "api",
              "Daily totals, exports, liability, load charts."),
    C4Element("order-states", "Order state machine", C4Level.CODE, "api-orders",
              "placed, preparing, ready, collected transitions."),
]

C4_RELATIONS = [
    C4Relation("web", "api", "submits orders over HTTPS"),
    C4Relation("display", "api", "subscribes to queue updates"),
    C4Relation("api", "db", "reads and writes till state"),
    C4Relation("api-orders", "api-payments", "authorizes before queueing"),
    C4Relation("api-kitchen", "api-orders", "advances order states"),
    C4Relation("api-reports", "db", "aggregates settled orders"),
]

C4_PATHS = [
    PathMapping("src/menu", "api-menu"),
    PathMapping("src/orders", "api-orders"),
    PathMapping("src/payments", "api-payments"),
    PathMapping("src/kitchen", "api-kitchen"),
    PathMapping("src/loyalty", "api-loyalty"),
    PathMapping("src/reports", "api-reports"),
    PathMapping("web", "web"),
]

MANIFEST = {
    "name": "snackbar",
    "agent": {"adapter": "mock", "params": {"seed": 7}},
    "loop": {"max_iterations": 25},
    "service": {"port": 8787},
}


# ---------------------------------------------------------------------------
# Prompt logs
# ---------------------------------------------------------------------------
# Counts are pinned: they are the lexicographically first integer
# compositions of 176 whose banker's-rounded percentages reproduce the
# published distributions 62/16/9/7/5 and 52/27/5/5/11.

SHIFT_UP_PROMPTS = [
    ("proceed_next_step", 109, [
        "Proceed with the next step.",
        "Go ahead with the next step.",
        "Continue with the next step.",
        "Proceed.",
        "Carry on with the next step.",
    ]),
    ("execute_acceptance_tests", 29, [
        "Run the acceptance tests for {iss}.",
        "Execute the acceptance tests again.",
        "Re-run the acceptance tests for the current issue.",
    ]),
    ("developer_identified_fix", 16, [
        "Fix the off-by-one in the pickup numbers.",
        "The cart total is wrong after removing a line, fix it.",
        "Fix the broken sold-out badge logic.",
        "The queue sort is incorrect after reconnect, fix it.",
    ]),
    ("accept_agent_solution", 13, [
        "The solution looks good.",
        "Accepted, ship it as is.",
        "Approve the change as written.",
    ]),
    ("initiate_next_plan_step", 9, [
        "Draft the plan for the next phase.",
        "Start the plan for {iss}.",
        "Begin the implementation plan for the kitchen queue.",
    ]),
]

STRUCTURED_PROMPTS = [
    ("manual_issue_fix", 91, [
        "Fix the crash when the cart is empty.",
        "There is a bug in the receipt footer, sort it out.",
        "The queue order is wrong after refresh, fix that.",
        "Fix the rounding error in the totals.",
        "Checkout is broken on narrow screens, fix it.",
    ]),
    ("proceed_next_step", 47, [
        "Continue.",
        "Go ahead with the next step.",
        "Continue where you left off.",
    ]),
    ("feature_planning", 9, [
        "Sketch a plan for the loyalty screen.",
        "Outline the architecture for payments.",
        "Draft a roadmap for the reporting pages.",
    ]),
    ("new_feature_implementation", 9, [
        "Implement the new feature for coupon codes.",
        "Add a new feature: table-side ordering.",
        "Build the new feature for gift cards.",
    ]),
    ("other", 20, [
        "Thanks, that is all for today.",
        "What did we ship yesterday?",
        "Summarize the diff in two sentences.",
        "How big is the codebase now?",
    ]),
]


def build_bundle() -> ArtifactBundle:
    requirements = [
        Requirement(id=f"REQ-{n}", text=text, kind=kind)
        for n, (kind, text) in enumerate(REQUIREMENTS, start=1)
    ]

    stories: list[UserStory] = []
    tests: list[AcceptanceTest] = []
    phases: list[RoadmapPhase] = []
    test_files: dict[str, list[str]] = {}
    story_tests: dict[str, list[str]] = {}

    story_n = 0
    test_n = 0
    for phase_index, (name, goal, tasks, deps, phase_stories) in enumerate(PHASES):
        phase_test_ids: list[str] = []
        for as_a, i_want, so_that, refs, story_test_defs in phase_stories:
            story_n += 1
            sid = f"US-{story_n}"
            stories.append(
                UserStory(id=sid, as_a=as_a, i_want=i_want, so_that=so_that,
                          requirement_refs=tuple(refs))
            )
            story_tests[sid] = []
            for test_name, clause_defs in story_test_defs:
                test_n += 1
                tid = f"TC-{test_n}"
                clauses = tuple(Clause(_KIND[k], text) for k, text in clause_defs)
                tests.append(
                    AcceptanceTest(id=tid, story_ref=sid, name=test_name, clauses=clauses)
                )
                story_tests[sid].append(tid)
                phase_test_ids.append(tid)
        phases.append(
            RoadmapPhase(
                id=f"PH-{phase_index + 1}",
                name=name,
                goal=goal,
                architecture_tasks=tuple(tasks),
                test_ids=tuple(phase_test_ids),
                depends_on=tuple(deps),
            )
        )
        test_files[GWT_FILES[phase_index]] = list(phase_test_ids)

    story_phase = {}
    for phase in phases:
        for tid in phase.test_ids:
            story_phase[tid] = phase.id

    issues: list[WorkIssue] = []
    for n, (title, description, story_numbers) in enumerate(ISSUES, start=1):
        constraint_ids: list[str] = []
        for s in story_numbers:
            constraint_ids.extend(story_tests[f"US-{s}"])
        phase_ref = story_phase[constraint_ids[0]]
        links = [f"roadmap/phases.json#{phase_ref}"]
        if n in (3, 26):
            links.append("architecture/adr/ADR-0002-prices-in-integer-cents.md")
        if n in (11, 12):
            links.append(
                "architecture/adr/ADR-0004-hosted-provider-page-for-card-payments.md"
            )
        if n == 15:
            links.append(
                "architecture/adr/ADR-0005-server-pushed-events-for-the-kitchen-queue.md"
            )
        issues.append(
            WorkIssue(
                id=f"ISS-{n}",
                phase_ref=phase_ref,
                title=title,
                description=description,
                constraint_test_ids=tuple(constraint_ids),
                context_links=tuple(links),
                status=IssueStatus.OPEN,
            )
        )

    return ArtifactBundle(
        root=TARGET,
        manifest=dict(MANIFEST),
        requirements=requirements,
        stories=stories,
        tests=tests,
        c4=C4Model(
            elements=tuple(C4_ELEMENTS),
            relations=tuple(C4_RELATIONS),
            path_mappings=tuple(C4_PATHS),
        ),
        adrs=list(ADRS),
        phases=phases,
        issues=issues,
        test_files=test_files,
    )


def write_prompt_log(bundle: ArtifactBundle) -> None:
    log_path = TARGET / "logs" / "prompts.jsonl"
    log_path.parent.mkdir(parents=True, exist_ok=True)
    if log_path.exists():
        log_path.unlink()

    issue_cycle = [i.id for i in bundle.issues]

    def expand(blocks, paradigm, start, shuffle_seed):
        entries = []
        issue_i = 0
        for category, count, templates in blocks:
            for k in range(count):
                text = templates[k % len(templates)]
                issue_ref = None
                if "{iss}" in text:
                    issue_ref = issue_cycle[issue_i % len(issue_cycle)]
                    issue_i += 1
                    text = text.format(iss=issue_ref)
                entries.append((category, text, issue_ref))
        random.Random(shuffle_seed).shuffle(entries)
        ts = start
        for category, text, issue_ref in entries:
            record = PromptRecord(
                ts=ts.isoformat(),
                paradigm=paradigm,
                text=text,
                issue_ref=issue_ref,
                label=category,
            )
            assert categorize(record) == category, (paradigm, text, category)
            stripped = PromptRecord(ts=record.ts, paradigm=paradigm, text=text,
                                    issue_ref=issue_ref, label=None)
            assert categorize(stripped) == category, (paradigm, text, category)
            record_prompt(log_path, record)
            ts += timedelta(minutes=7)

    expand(SHIFT_UP_PROMPTS, Paradigm.SHIFT_UP,
           datetime(2025, 3, 3, 9, 0, tzinfo=timezone.utc), 11)
    expand(STRUCTURED_PROMPTS, Paradigm.STRUCTURED_VIBE,
           datetime(2025, 4, 7, 9, 0, tzinfo=timezone.utc), 13)


def check(bundle: ArtifactBundle) -> None:
    violations = validate(bundle)
    assert not violations, violations[:10]
    assert len(bundle.requirements) == 32
    assert len(bundle.stories) == 68
    assert len(bundle.tests) == 175
    assert len(bundle.phases) == 10
    assert len(bundle.issues) == 30
    assert len(bundle.adrs) == 6

    two = sum(1 for s in bundle.stories
              if sum(1 for t in bundle.tests if t.story_ref == s.id) == 2)
    three = sum(1 for s in bundle.stories
                if sum(1 for t in bundle.tests if t.story_ref == s.id) == 3)
    assert (two, three) == (29, 39), (two, three)

    # Issues partition the test set exactly.
    constrained = [tid for i in bundle.issues for tid in i.constraint_test_ids]
    assert len(constrained) == 175
    assert len(set(constrained)) == 175

    warnings = lint_gwt(GwtFile(tests=tuple(bundle.tests)))
    got = {(w.test_id, w.rule) for w in warnings}
    expected = {
        ("TC-25", "then-conjunction"),
        ("TC-58", "multiple-when"),
        ("TC-92", "multiple-when"),
        ("TC-131", "duplicate-clause-text"),
    }
    assert got == expected, got.symmetric_difference(expected)


def check_written() -> None:
    loaded = load_bundle(TARGET)
    assert len(loaded.tests) == 175

    for paradigm, expected in (
        (Paradigm.SHIFT_UP, (62, 16, 9, 7, 5)),
        (Paradigm.STRUCTURED_VIBE, (52, 27, 5, 5, 11)),
    ):
        report = distribution_report(TARGET / "logs" / "prompts.jsonl", paradigm)
        assert report.total == 176, report.total
        percents = tuple(p for _, _, p in report.rows)
        assert percents == expected, (paradigm, percents)


def main() -> None:
    bundle = build_bundle()
    check(bundle)
    if TARGET.exists():
        shutil.rmtree(TARGET)
    save_bundle(bundle, TARGET)
    write_prompt_log(bundle)
    check_written()
    counts = {
        "requirements": len(bundle.requirements),
        "stories": len(bundle.stories),
        "tests": len(bundle.tests),
        "phases": len(bundle.phases),
        "issues": len(bundle.issues),
        "adrs": len(bundle.adrs),
    }
    print(f"fixture written to {TARGET}")
    print("  " + "  ".join(f"{k}={v}" for k, v in counts.items()))


if __name__ == "__main__":
    main()
