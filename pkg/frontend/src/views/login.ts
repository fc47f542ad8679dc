/**
 * Login form. Failure is a single generic message no matter the cause, same
 * as the API: nothing here may reveal whether a username exists.
 */

import { ApiError, type ApiClient, type LoginResponse } from "../api.js";
import { h, labeledInput } from "./dom.js";

export const LOGIN_FAILED_MESSAGE = "login failed: check the username and password";

export interface LoginContext {
  doc: Document;
  api: ApiClient;
  onSuccess(login: LoginResponse): void;
}

export function renderLogin(container: HTMLElement, ctx: LoginContext): void {
  const doc = ctx.doc;
  container.replaceChildren();
  const form = h(doc, "form", "login-form");
  form.append(h(doc, "h2", undefined, "Masuk"));
  const username = labeledInput(doc, "username", "Nama pengguna");
  const password = labeledInput(doc, "password", "Kata sandi", "password");
  const error = h(doc, "p", "login-error");
  const submit = h(doc, "button", undefined, "Masuk");
  submit.type = "submit";
  form.append(username.wrapper, password.wrapper, error, submit);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    error.textContent = "";
    void ctx.api
      .login(username.input.value, password.input.value)
      .then((login) => ctx.onSuccess(login))
      .catch((failure: unknown) => {
        if (failure instanceof ApiError && failure.status === 401) {
          error.textContent = LOGIN_FAILED_MESSAGE;
        } else if (failure instanceof ApiError) {
          error.textContent = failure.body.message;
        } else {
          error.textContent = "the server cannot be reached; try again";
        }
      });
  });

  container.append(form);
}
