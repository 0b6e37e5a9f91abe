from __future__ import annotations

import pytest

from faqgen.gateway import (
    AnswerPhrase,
    BackendEndpointSet,
    BackendUnavailable,
    EmptyGeneration,
    GeneratedQuestion,
    RequestRejected,
    complete_answer,
    extract_answer_phrase,
    generate_questions,
    stub_answer_phrase,
    stub_complete_answer,
    stub_question_texts,
)

THREE_SENTENCES = "Cats sleep daily. Dogs bark loudly. Birds fly south."

MARKET_RESEARCH_CONTEXT = (
    "Primary market research is a customised research technique that marketing "
    "professionals and businesses use to collect original information in the field. "
    "It is conducted directly by the person or organisation that stands to gain from "
    "the responses and can be performed through surveys, interviews, or focus groups."
)
MARKET_RESEARCH_QUESTION = "What is primary market research?"
MARKET_RESEARCH_PHRASE = "a customised research technique to collect original information"
MARKET_RESEARCH_ANSWER = (
    "Primary market research is a customised research technique that marketing "
    "professionals and businesses use to collect original information in the field."
)


def dead_endpoints(**kwargs) -> BackendEndpointSet:
    # 127.0.0.1:9 is reliably refused
    return BackendEndpointSet(max_retries=0, timeout_ms=500, **kwargs)


class TestStubQuestions:
    def test_three_sentence_fixture(self):
        questions = generate_questions(THREE_SENTENCES, "Diaries and Daily Life", 0)
        assert [q.text for q in questions] == [
            "What does the passage state about cats?",
            "What does the passage state about dogs?",
            "What does the passage state about birds?",
        ]
        assert [(q.chunk_index, q.q_index) for q in questions] == [(0, 0), (0, 1), (0, 2)]

    def test_cap_saturation(self):
        context = " ".join(f"Sentence number {i} talks about topic{i}." for i in range(8))
        questions = generate_questions(context, "Gaming", 4, cap=5)
        assert len(questions) == 5

    def test_skips_content_free_sentences(self):
        context = "It is. Dogs bark loudly."
        texts = stub_question_texts(context, 5)
        assert texts == ["What does the passage state about dogs?"]

    def test_cap_below_one_rejected(self):
        with pytest.raises(ValueError):
            generate_questions(THREE_SENTENCES, "Gaming", 0, cap=0)

    def test_blank_context_rejected(self):
        with pytest.raises(ValueError):
            generate_questions("  ", "Gaming", 0)

    def test_pure_function(self):
        first = stub_question_texts(THREE_SENTENCES, 5)
        second = stub_question_texts(THREE_SENTENCES, 5)
        assert first == second


class TestStubAnswerPhrase:
    def test_entanglement_fixture(self):
        context = "Entanglement describes a peculiar connection between particles."
        question = GeneratedQuestion(
            chunk_index=0, q_index=0,
            text="What does the passage state about entanglement?",
        )
        phrase = extract_answer_phrase(context, question)
        assert phrase.text == "entanglement describes peculiar connection between particles"

    def test_anchor_missing_falls_back_to_first_sentence(self):
        question = GeneratedQuestion(
            chunk_index=0, q_index=0, text="What does the passage state about zebras?"
        )
        phrase = extract_answer_phrase(THREE_SENTENCES, question)
        assert phrase.text == "cats sleep daily"

    def test_phrase_capped_at_six_tokens(self):
        context = (
            "Gardens bloom yearly with roses tulips daisies lilies orchids and ferns."
        )
        text = stub_answer_phrase(context, "What does the passage state about gardens?")
        assert len(text.split()) == 6

    def test_stopword_only_sentence_uses_plain_tokens(self):
        context = "It is. Dogs bark loudly."
        # anchor absent everywhere -> first sentence, which has no content tokens
        text = stub_answer_phrase(context, "What does the passage state about zebras?")
        assert text == "it is"


class TestStubCompleteAnswer:
    def test_returns_source_sentence(self):
        question = GeneratedQuestion(
            chunk_index=0, q_index=1, text="What does the passage state about dogs?"
        )
        phrase = AnswerPhrase(text="dogs bark loudly")
        answer = complete_answer(THREE_SENTENCES, question, phrase)
        assert answer.text == "Dogs bark loudly."

    def test_appends_missing_terminal_punctuation(self):
        context = "Dogs bark loudly"
        text = stub_complete_answer(context, "What does the passage state about dogs?")
        assert text == "Dogs bark loudly."

    def test_stub_answers_are_verbatim_sentences(self):
        for question_text in stub_question_texts(THREE_SENTENCES, 5):
            answer = stub_complete_answer(THREE_SENTENCES, question_text)
            assert answer in THREE_SENTENCES


class TestEndpointSetValidation:
    def test_defaults_are_valid(self):
        endpoints = BackendEndpointSet()
        assert endpoints.questions_url is None

    def test_bounds(self):
        with pytest.raises(ValueError):
            BackendEndpointSet(timeout_ms=0)
        with pytest.raises(ValueError):
            BackendEndpointSet(max_retries=11)
        with pytest.raises(ValueError):
            BackendEndpointSet(max_retries=-1)


class TestRemoteQuestions:
    def test_dedup_preserves_first_occurrence(self, canned_backend):
        url, _ = canned_backend(
            {"/v1/questions": [(200, {"questions": ["Q1?", "Q1?", "Q2?"]})]}
        )
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=0)
        questions = generate_questions("Some context here.", "Gaming", 0, endpoints=endpoints)
        assert [q.text for q in questions] == ["Q1?", "Q2?"]
        assert [q.q_index for q in questions] == [0, 1]

    def test_truncates_to_cap_before_dedup(self, canned_backend):
        url, _ = canned_backend(
            {"/v1/questions": [(200, {"questions": ["A?", "B?", "C?", "D?"]})]}
        )
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=0)
        questions = generate_questions(
            "Some context here.", "Gaming", 0, cap=2, endpoints=endpoints
        )
        assert [q.text for q in questions] == ["A?", "B?"]

    def test_missing_question_mark_normalized(self, canned_backend):
        url, _ = canned_backend(
            {"/v1/questions": [(200, {"questions": ["Where is the stadium"]})]}
        )
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=0)
        questions = generate_questions("Some context.", "Sports", 0, endpoints=endpoints)
        assert questions[0].text == "Where is the stadium?"

    def test_zero_questions_is_empty_generation(self, canned_backend):
        url, _ = canned_backend({"/v1/questions": [(200, {"questions": []})]})
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=0)
        with pytest.raises(EmptyGeneration):
            generate_questions("Some context.", "Gaming", 0, endpoints=endpoints)

    def test_request_carries_context_domain_cap(self, canned_backend):
        url, server = canned_backend({"/v1/questions": [(200, {"questions": ["Q?"]})]})
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=0)
        generate_questions("Ctx sentence.", "Music", 3, cap=2, endpoints=endpoints)
        assert server.requests == [
            ("/v1/questions", {"context": "Ctx sentence.", "domain": "Music", "cap": 2})
        ]

    def test_connection_refused_backend_unavailable(self):
        endpoints = dead_endpoints(questions_url="http://127.0.0.1:9/v1/questions")
        with pytest.raises(BackendUnavailable):
            generate_questions("Some context.", "Gaming", 0, endpoints=endpoints)

    def test_retry_recovers_after_transient_500(self, canned_backend):
        url, server = canned_backend(
            {
                "/v1/questions": [
                    (500, {"error": "flaky"}),
                    (200, {"questions": ["Recovered?"]}),
                ]
            }
        )
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=1)
        questions = generate_questions("Some context.", "Gaming", 0, endpoints=endpoints)
        assert [q.text for q in questions] == ["Recovered?"]
        assert server.hits["/v1/questions"] == 2

    def test_exhausted_retries_raise(self, canned_backend):
        url, server = canned_backend({"/v1/questions": [(500, {"error": "down"})]})
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=1)
        with pytest.raises(BackendUnavailable):
            generate_questions("Some context.", "Gaming", 0, endpoints=endpoints)
        assert server.hits["/v1/questions"] == 2

    def test_422_is_rejected_without_retry(self, canned_backend):
        url, server = canned_backend({"/v1/questions": [(422, {"error": "bad"})]})
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=3)
        with pytest.raises(RequestRejected):
            generate_questions("Some context.", "Gaming", 0, endpoints=endpoints)
        assert server.hits["/v1/questions"] == 1

    def test_malformed_body_is_unavailable(self, canned_backend):
        url, _ = canned_backend({"/v1/questions": [(200, {"nope": 1})]})
        endpoints = BackendEndpointSet(questions_url=f"{url}/v1/questions", max_retries=0)
        with pytest.raises(BackendUnavailable):
            generate_questions("Some context.", "Gaming", 0, endpoints=endpoints)


class TestRemoteAnswerPhrase:
    def test_trimming_invariant(self, canned_backend):
        url, _ = canned_backend(
            {"/v1/answer_phrase": [(200, {"answer_phrase": "  tensions between states "})]}
        )
        endpoints = BackendEndpointSet(
            answer_phrase_url=f"{url}/v1/answer_phrase", max_retries=0
        )
        question = GeneratedQuestion(chunk_index=0, q_index=0, text="What caused it?")
        phrase = extract_answer_phrase("A context sentence.", question, endpoints)
        assert phrase.text == "tensions between states"

    def test_blank_phrase_is_empty_generation(self, canned_backend):
        url, _ = canned_backend({"/v1/answer_phrase": [(200, {"answer_phrase": "  "})]})
        endpoints = BackendEndpointSet(
            answer_phrase_url=f"{url}/v1/answer_phrase", max_retries=0
        )
        question = GeneratedQuestion(chunk_index=0, q_index=0, text="What caused it?")
        with pytest.raises(EmptyGeneration):
            extract_answer_phrase("A context sentence.", question, endpoints)


class TestRemoteCompleteAnswer:
    def test_table_row_passthrough(self, canned_backend):
        url, server = canned_backend(
            {"/v1/complete_answer": [(200, {"answer": MARKET_RESEARCH_ANSWER})]}
        )
        endpoints = BackendEndpointSet(
            complete_answer_url=f"{url}/v1/complete_answer", max_retries=0
        )
        question = GeneratedQuestion(chunk_index=0, q_index=0, text=MARKET_RESEARCH_QUESTION)
        phrase = AnswerPhrase(text=MARKET_RESEARCH_PHRASE)
        answer = complete_answer(MARKET_RESEARCH_CONTEXT, question, phrase, endpoints)
        assert answer.text == MARKET_RESEARCH_ANSWER
        assert server.requests[0][1] == {
            "context": MARKET_RESEARCH_CONTEXT,
            "question": MARKET_RESEARCH_QUESTION,
            "answer_phrase": MARKET_RESEARCH_PHRASE,
        }

    def test_terminal_punctuation_normalized(self, canned_backend):
        url, _ = canned_backend(
            {"/v1/complete_answer": [(200, {"answer": "An unterminated reply"})]}
        )
        endpoints = BackendEndpointSet(
            complete_answer_url=f"{url}/v1/complete_answer", max_retries=0
        )
        question = GeneratedQuestion(chunk_index=0, q_index=0, text="What is it?")
        answer = complete_answer("Ctx.", question, AnswerPhrase(text="x"), endpoints)
        assert answer.text == "An unterminated reply."
