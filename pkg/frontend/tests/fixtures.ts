// Canned server payloads shaped exactly like the live API's JSON.

import type {
  AnswerResponse,
  HistoryResponse,
  QuestionStatusResponse,
  StartResponse,
} from "../src/api.js";

export const startWithQuestion: StartResponse = {
  id: "abc123",
  student: "s1",
  desired: "delete",
  phase: "question_asked",
  question: {
    leaf: "insert_select",
    attempt: 1,
    max_attempts: 2,
    prompt: "Copy every row of old_staff into staff.",
  },
  recommendation: null,
};

export const startWithRecommendation: StartResponse = {
  id: "abc124",
  student: "s1",
  desired: "select",
  phase: "done",
  question: null,
  recommendation: {
    verdict: "direct_content",
    targets: [
      { concept: "select", url: "http://sql.example.org/learn/select" },
    ],
  },
};

export const answerRetry: AnswerResponse = {
  feedback: {
    leaf: "insert_select",
    attempt: 1,
    outcome: "not_passed",
    message: "Not passed insert_select on attempt 1 of 2.",
  },
  question: {
    leaf: "insert_select",
    attempt: 2,
    max_attempts: 2,
    prompt: "Copy every row of old_staff into staff.",
  },
  recommendation: null,
  phase: "question_asked",
};

export const answerFinal: AnswerResponse = {
  feedback: {
    leaf: "insert_value",
    attempt: 2,
    outcome: "not_passed",
    message: "Not passed insert_value on attempt 2.",
  },
  question: null,
  recommendation: {
    verdict: "remediate_leaves",
    targets: [
      { concept: "insert_select", url: "http://sql.example.org/learn/insert#select" },
      { concept: "insert_value", url: "http://sql.example.org/learn/insert#value" },
    ],
  },
  phase: "done",
};

export const refreshActive: QuestionStatusResponse = {
  status: "active",
  question: {
    leaf: "insert_select",
    attempt: 2,
    max_attempts: 2,
    prompt: "Copy every row of old_staff into staff.",
  },
  recommendation: null,
};

export const refreshDone: QuestionStatusResponse = {
  status: "done",
  question: null,
  recommendation: {
    verdict: "remediate_leaves",
    targets: [
      { concept: "delete_select", url: "http://sql.example.org/learn/delete#select" },
    ],
  },
};

export const updateHistory: HistoryResponse = {
  student: "s1",
  sessions: [
    {
      desired: "update",
      prepared: false,
      remark:
        "Not prepared to learn UPDATE; recommended to learn "
        + "DELETE_SELECT and DELETE_WHERE.",
      total_duration: 369,
      tasks: [
        {
          question: "delete_select",
          final_outcome: "not_passed",
          average_duration: 36.0,
          attempts: [
            {
              attempt: 1,
              asked_at: "2015-11-03T11:08:54Z",
              answered_at: "2015-11-03T11:09:27Z",
              outcome: "not_passed",
              duration: 33,
            },
            {
              attempt: 2,
              asked_at: "2015-11-03T11:11:31Z",
              answered_at: "2015-11-03T11:12:10Z",
              outcome: "not_passed",
              duration: 39,
            },
          ],
        },
        {
          question: "delete_where",
          final_outcome: "not_passed",
          average_duration: 148.5,
          attempts: [
            {
              attempt: 1,
              asked_at: "2015-11-03T11:12:10Z",
              answered_at: "2015-11-03T11:14:43Z",
              outcome: "not_passed",
              duration: 153,
            },
            {
              attempt: 2,
              asked_at: "2015-11-03T11:14:50Z",
              answered_at: "2015-11-03T11:17:14Z",
              outcome: "not_passed",
              duration: 144,
            },
          ],
        },
      ],
    },
  ],
};

export const emptyHistory: HistoryResponse = {
  student: "kim",
  sessions: [],
};
