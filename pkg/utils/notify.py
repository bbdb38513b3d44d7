# -*- coding: utf-8 -*-
"""
Posts a run summary card to a chat webhook (Google Chat card format) after
`run` or `verify`. Delivery failures are logged and never fail the run.
"""

import logging
import time
from typing import Any, Dict, Iterable, Optional, Tuple

import requests

log = logging.getLogger(__name__)

MAX_RETRIES = 2
RETRY_DELAY_SECONDS = 5


def _send_card(webhook_url: str, card_payload: Dict[str, Any], retry_delay: float = RETRY_DELAY_SECONDS) -> bool:
    """
    Sends a card payload to the webhook with a retry mechanism.

    Returns:
        bool: True if the message was sent successfully, False otherwise.
    """
    for attempt in range(MAX_RETRIES):
        try:
            response = requests.post(webhook_url, json=card_payload, timeout=15)
            response.raise_for_status()
            log.info(f"Sent run summary to webhook on attempt {attempt + 1}.")
            return True
        except requests.exceptions.RequestException as e:
            log.error(f"Attempt {attempt + 1} failed to send run summary: {e}")
            if attempt < MAX_RETRIES - 1:
                log.info(f"Retrying in {retry_delay} seconds...")
                time.sleep(retry_delay)
    log.error("All retry attempts failed.")
    return False


def build_summary_card(name: str, command: str, verdicts: Iterable[Tuple[str, str]],
                       output_dir: str, stamp: str) -> Dict[str, Any]:
    """
    Card headed by the overall experiment verdict (FAIL if any check or decay
    report failed) and the artifacts directory. Only failing labels are listed.
    """
    verdicts = list(verdicts)
    failed = [label for label, verdict in verdicts if verdict != "PASS"]
    overall = "FAIL" if failed else "PASS"
    icon = "🟢" if not failed else "🔴"
    if not verdicts:
        detail = "No verdicts requested."
    elif failed:
        detail = f"{len(failed)} of {len(verdicts)} failed: " + ", ".join(failed)
    else:
        detail = f"All {len(verdicts)} passed."
    text = (
        f"<b>Experiment verdict: {overall}</b><br>{detail}"
        f"<br><br><b>Artifacts:</b> {output_dir}"
    )
    return {
        "cardsV2": [{
            "cardId": "run-summary-card",
            "card": {
                "header": {"title": f"{icon} {name}: {overall}", "subtitle": f"nsdecay {command} · {stamp}"},
                "sections": [{"widgets": [{"textParagraph": {"text": text}}]}],
            },
        }]
    }


def send_run_summary(notify_config: Dict[str, Any], name: str, command: str,
                     verdicts: Iterable[Tuple[str, str]], output_dir: str, stamp: str,
                     retry_delay: Optional[float] = None) -> bool:
    """Posts the summary when notify.enabled is set; returns whether a card was delivered."""
    if not notify_config.get("enabled"):
        return False
    webhook_url = notify_config.get("webhook_url")
    if not webhook_url:
        log.error("Webhook URL is not configured. Skipping notification.")
        return False
    card = build_summary_card(name, command, verdicts, output_dir, stamp)
    return _send_card(webhook_url, card, RETRY_DELAY_SECONDS if retry_delay is None else retry_delay)
